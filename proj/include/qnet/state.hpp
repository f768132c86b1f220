// Copyright 2026 The qnetsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNET_STATE_HPP
#define QNET_STATE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qnet/rng.hpp"

namespace qnet {

using cplx = std::complex<double>;

// Qubit 0 is the least-significant bit of the amplitude index, project-wide.
inline constexpr int kMaxPureQubits = 20;
inline constexpr int kMaxDensityQubits = 10;
inline constexpr double kForcedBranchTol = 1e-12;

enum class Basis : std::uint8_t { X, Y, Z };
const char* basis_name(Basis b);
Basis basis_from_name(const std::string& s);

enum class GateKind : std::uint8_t { H, X, Y, Z, S, Sdg, CX, CZ, Swap };
int gate_arity(GateKind k);
const char* gate_name(GateKind k);
/// Row-major 2x2 matrix for 1-qubit kinds; nullptr for 2-qubit kinds.
const cplx* gate_matrix1(GateKind k);

struct Gate {
  GateKind kind;
  int q0 = -1;
  int q1 = -1;

  static Gate h(int q) { return {GateKind::H, q, -1}; }
  static Gate x(int q) { return {GateKind::X, q, -1}; }
  static Gate y(int q) { return {GateKind::Y, q, -1}; }
  static Gate z(int q) { return {GateKind::Z, q, -1}; }
  static Gate s(int q) { return {GateKind::S, q, -1}; }
  static Gate sdg(int q) { return {GateKind::Sdg, q, -1}; }
  static Gate cx(int control, int target) {
    return {GateKind::CX, control, target};
  }
  static Gate cz(int a, int b) { return {GateKind::CZ, a, b}; }
  static Gate swap(int a, int b) { return {GateKind::Swap, a, b}; }

  int arity() const { return gate_arity(kind); }
};

enum class Pauli : std::uint8_t { I, X, Y, Z };
char pauli_char(Pauli p);

struct PauliString {
  std::vector<Pauli> letters;
  cplx phase{1.0, 0.0};  // one of +1, -1, +i, -i

  static PauliString identity(int n) {
    return PauliString{std::vector<Pauli>(n, Pauli::I), {1.0, 0.0}};
  }
  int size() const { return static_cast<int>(letters.size()); }
  std::string str() const;
};

struct PureState {
  int num_qubits = 0;
  std::vector<cplx> amp;

  static PureState zeros(int n);
  static PureState plus(int n);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

/// Dense density matrix, stored column-major: entry(r,c) = data[r + c*dim].
/// The storage doubles as a 2n-qubit amplitude vector (row index in the low
/// n bits), so gate conjugation reuses the pure-state kernels.
struct DensityMatrix {
  int num_qubits = 0;
  std::vector<cplx> data;

  static DensityMatrix zeros_state(int n);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n);

  std::size_t dim() const { return std::size_t{1} << num_qubits; }
  cplx& at(std::size_t r, std::size_t c) { return data[r + (c << num_qubits)]; }
  const cplx& at(std::size_t r, std::size_t c) const {
    return data[r + (c << num_qubits)];
  }
  double trace_real() const;
  /// Largest Hermiticity defect max |A - A^dagger| entry.
  double hermiticity_defect() const;
};

// -- gates ------------------------------------------------------------------

void apply(PureState& st, const Gate& g);
void apply(DensityMatrix& rho, const Gate& g);
/// U rho U^dagger for an arbitrary 1-qubit U (row-major).
void apply_matrix1(PureState& st, int q, const cplx* m);
void apply_matrix1(DensityMatrix& rho, int q, const cplx* m);
void apply_pauli(PureState& st, const PauliString& p);

// -- measurement ------------------------------------------------------------

struct MeasureResult {
  int bit;             // 0 <-> +1 eigenvalue, 1 <-> -1 eigenvalue
  double probability;  // prior probability of the returned bit
};

/// Collapses in the measured basis the way a circuit would: the basis change
/// (X: H; Y: Sdg then H) is applied and left in place, so the measured qubit
/// ends in |bit> of the computational basis.
MeasureResult measure(PureState& st, int q, Basis basis, RandomSource& rnd);
/// Forced variant for post-selection; throws if the branch probability is
/// below kForcedBranchTol.
MeasureResult measure_forced(PureState& st, int q, Basis basis, int bit);
double outcome_probability(const PureState& st, int q, Basis basis, int bit);

struct DensityBranch {
  double probability;
  DensityMatrix state;  // collapsed, trace 1 (empty when probability ~ 0)
};
std::array<DensityBranch, 2> measure_branches(const DensityMatrix& rho, int q,
                                              Basis basis);

// -- reductions and expectations ---------------------------------------------

/// Reduced state over `keep` (distinct, in range); keep[i] becomes qubit i.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);
/// Factor a product qubit out of a pure state: returns the (n-1)-qubit state
/// of the rest given qubit q is |bit>. Throws if the discarded branch holds
/// more than `tol` weight, i.e. qubit q was still entangled.
PureState slice_qubit(const PureState& st, int q, int bit, double tol = 1e-9);

double expectation(const DensityMatrix& rho, const PauliString& p);
double expectation(const PureState& st, const PauliString& p);
/// tr(O rho) for a dense Hermitian observable (row-major, dim x dim).
double expectation(const DensityMatrix& rho, const std::vector<cplx>& obs);

cplx inner(const PureState& a, const PureState& b);
/// |<a|b>|^2
double overlap2(const PureState& a, const PureState& b);

// -- fixtures ----------------------------------------------------------------

PureState phi_plus();                // (|00> + |11>)/sqrt(2)
PureState g2_state();                // CZ|++> = (|0+> + |1->)/sqrt(2)
PureState graph_state_vector(int n, const std::vector<std::pair<int, int>>& edges);

}  // namespace qnet

#endif
