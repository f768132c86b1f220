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

#include "qnet/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnet/kernels.hpp"

namespace qnet {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

const cplx kMatH[4] = {{kInvSqrt2, 0}, {kInvSqrt2, 0}, {kInvSqrt2, 0}, {-kInvSqrt2, 0}};
const cplx kMatX[4] = {{0, 0}, {1, 0}, {1, 0}, {0, 0}};
const cplx kMatY[4] = {{0, 0}, {0, -1}, {0, 1}, {0, 0}};
const cplx kMatZ[4] = {{1, 0}, {0, 0}, {0, 0}, {-1, 0}};
const cplx kMatS[4] = {{1, 0}, {0, 0}, {0, 0}, {0, 1}};
const cplx kMatSdg[4] = {{1, 0}, {0, 0}, {0, 0}, {0, -1}};

void check_qubit(int q, int n, const char* what) {
  if (q < 0 || q >= n) {
    throw std::out_of_range(std::string(what) + ": qubit " +
                            std::to_string(q) + " out of range for " +
                            std::to_string(n) + "-qubit register");
  }
}

void check_gate(const Gate& g, int n) {
  check_qubit(g.q0, n, gate_name(g.kind));
  if (g.arity() == 2) {
    check_qubit(g.q1, n, gate_name(g.kind));
    if (g.q0 == g.q1) {
      throw std::invalid_argument(std::string(gate_name(g.kind)) +
                                  ": duplicate target qubit " +
                                  std::to_string(g.q0));
    }
  }
}

}  // namespace

const char* basis_name(Basis b) {
  switch (b) {
    case Basis::X: return "X";
    case Basis::Y: return "Y";
    case Basis::Z: return "Z";
  }
  return "?";
}

Basis basis_from_name(const std::string& s) {
  if (s == "X" || s == "x") return Basis::X;
  if (s == "Y" || s == "y") return Basis::Y;
  if (s == "Z" || s == "z") return Basis::Z;
  throw std::invalid_argument("unknown measurement basis: " + s);
}

int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::Swap:
      return 2;
    default:
      return 1;
  }
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::Swap: return "SWAP";
  }
  return "?";
}

const cplx* gate_matrix1(GateKind k) {
  switch (k) {
    case GateKind::H: return kMatH;
    case GateKind::X: return kMatX;
    case GateKind::Y: return kMatY;
    case GateKind::Z: return kMatZ;
    case GateKind::S: return kMatS;
    case GateKind::Sdg: return kMatSdg;
    default: return nullptr;
  }
}

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

std::string PauliString::str() const {
  std::string out;
  if (phase == cplx{1, 0}) out = "+";
  else if (phase == cplx{-1, 0}) out = "-";
  else if (phase == cplx{0, 1}) out = "+i";
  else out = "-i";
  for (Pauli p : letters) out.push_back(pauli_char(p));
  return out;
}

PureState PureState::zeros(int n) {
  if (n < 1 || n > kMaxPureQubits) {
    throw std::invalid_argument("pure-state width must be in [1, " +
                                std::to_string(kMaxPureQubits) + "], got " +
                                std::to_string(n));
  }
  PureState st;
  st.num_qubits = n;
  st.amp.assign(std::size_t{1} << n, cplx{0, 0});
  st.amp[0] = cplx{1, 0};
  return st;
}

PureState PureState::plus(int n) {
  PureState st = zeros(n);
  const double a = std::pow(kInvSqrt2, n);
  std::fill(st.amp.begin(), st.amp.end(), cplx{a, 0});
  return st;
}

double PureState::norm() const {
  return kernels::active().sum_norm(amp.data(), amp.size());
}

DensityMatrix DensityMatrix::zeros_state(int n) {
  if (n < 1 || n > kMaxDensityQubits) {
    throw std::invalid_argument("density-matrix width must be in [1, " +
                                std::to_string(kMaxDensityQubits) +
                                "], got " + std::to_string(n));
  }
  DensityMatrix rho;
  rho.num_qubits = n;
  rho.data.assign(std::size_t{1} << (2 * n), cplx{0, 0});
  rho.data[0] = cplx{1, 0};
  return rho;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  DensityMatrix rho = zeros_state(psi.num_qubits);
  const std::size_t d = rho.dim();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      rho.at(r, c) = psi.amp[r] * std::conj(psi.amp[c]);
    }
  }
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  DensityMatrix rho = zeros_state(n);
  rho.data[0] = cplx{0, 0};
  const double p = 1.0 / static_cast<double>(rho.dim());
  for (std::size_t r = 0; r < rho.dim(); ++r) rho.at(r, r) = cplx{p, 0};
  return rho;
}

double DensityMatrix::trace_real() const {
  double t = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) t += at(r, r).real();
  return t;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t c = 0; c < dim(); ++c) {
    for (std::size_t r = 0; r <= c; ++r) {
      worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
    }
  }
  return worst;
}

void apply(PureState& st, const Gate& g) {
  check_gate(g, st.num_qubits);
  const auto& k = kernels::active();
  cplx* a = st.amp.data();
  const std::size_t n = st.amp.size();
  switch (g.kind) {
    case GateKind::CX: k.apply_cx(a, n, g.q0, g.q1); break;
    case GateKind::CZ: k.apply_cz(a, n, g.q0, g.q1); break;
    case GateKind::Swap: k.apply_swap(a, n, g.q0, g.q1); break;
    default: k.apply_matrix1(a, n, g.q0, gate_matrix1(g.kind)); break;
  }
}

void apply(DensityMatrix& rho, const Gate& g) {
  check_gate(g, rho.num_qubits);
  const auto& k = kernels::active();
  cplx* a = rho.data.data();
  const std::size_t n = rho.data.size();
  const int shift = rho.num_qubits;
  switch (g.kind) {
    case GateKind::CX:
      k.apply_cx(a, n, g.q0, g.q1);
      k.apply_cx(a, n, g.q0 + shift, g.q1 + shift);
      break;
    case GateKind::CZ:
      k.apply_cz(a, n, g.q0, g.q1);
      k.apply_cz(a, n, g.q0 + shift, g.q1 + shift);
      break;
    case GateKind::Swap:
      k.apply_swap(a, n, g.q0, g.q1);
      k.apply_swap(a, n, g.q0 + shift, g.q1 + shift);
      break;
    default: {
      const cplx* m = gate_matrix1(g.kind);
      const cplx mc[4] = {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]),
                          std::conj(m[3])};
      k.apply_matrix1(a, n, g.q0, m);
      k.apply_matrix1(a, n, g.q0 + shift, mc);
      break;
    }
  }
}

void apply_matrix1(PureState& st, int q, const cplx* m) {
  check_qubit(q, st.num_qubits, "apply_matrix1");
  kernels::active().apply_matrix1(st.amp.data(), st.amp.size(), q, m);
}

void apply_matrix1(DensityMatrix& rho, int q, const cplx* m) {
  check_qubit(q, rho.num_qubits, "apply_matrix1");
  const cplx mc[4] = {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]),
                      std::conj(m[3])};
  auto& k = kernels::active();
  k.apply_matrix1(rho.data.data(), rho.data.size(), q, m);
  k.apply_matrix1(rho.data.data(), rho.data.size(), q + rho.num_qubits, mc);
}

void apply_pauli(PureState& st, const PauliString& p) {
  if (p.size() != st.num_qubits) {
    throw std::invalid_argument("pauli width mismatch");
  }
  for (int q = 0; q < p.size(); ++q) {
    switch (p.letters[q]) {
      case Pauli::I: break;
      case Pauli::X: apply(st, Gate::x(q)); break;
      case Pauli::Y: apply(st, Gate::y(q)); break;
      case Pauli::Z: apply(st, Gate::z(q)); break;
    }
  }
  if (p.phase != cplx{1, 0}) {
    kernels::active().scale(st.amp.data(), st.amp.size(), p.phase);
  }
}

namespace {

void rotate_to_z(PureState& st, int q, Basis basis) {
  if (basis == Basis::X) {
    apply(st, Gate::h(q));
  } else if (basis == Basis::Y) {
    apply(st, Gate::sdg(q));
    apply(st, Gate::h(q));
  }
}

void rotate_to_z(DensityMatrix& rho, int q, Basis basis) {
  if (basis == Basis::X) {
    apply(rho, Gate::h(q));
  } else if (basis == Basis::Y) {
    apply(rho, Gate::sdg(q));
    apply(rho, Gate::h(q));
  }
}

MeasureResult collapse(PureState& st, int q, double p0, int bit) {
  const double p = bit ? (1.0 - p0) : p0;
  kernels::active().project(st.amp.data(), st.amp.size(), q, bit,
                            1.0 / std::sqrt(p));
  return {bit, p};
}

}  // namespace

MeasureResult measure(PureState& st, int q, Basis basis, RandomSource& rnd) {
  check_qubit(q, st.num_qubits, "measure");
  rotate_to_z(st, q, basis);
  const double p0 =
      kernels::active().prob_zero(st.amp.data(), st.amp.size(), q);
  const int bit = rnd.next_double() < p0 ? 0 : 1;
  return collapse(st, q, p0, bit);
}

MeasureResult measure_forced(PureState& st, int q, Basis basis, int bit) {
  check_qubit(q, st.num_qubits, "measure");
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  rotate_to_z(st, q, basis);
  const double p0 =
      kernels::active().prob_zero(st.amp.data(), st.amp.size(), q);
  const double p = bit ? (1.0 - p0) : p0;
  if (p < kForcedBranchTol) {
    throw std::invalid_argument(
        "forced measurement outcome has (near-)zero probability");
  }
  return collapse(st, q, p0, bit);
}

double outcome_probability(const PureState& st, int q, Basis basis, int bit) {
  PureState copy = st;
  rotate_to_z(copy, q, basis);
  const double p0 =
      kernels::active().prob_zero(copy.amp.data(), copy.amp.size(), q);
  return bit ? (1.0 - p0) : p0;
}

std::array<DensityBranch, 2> measure_branches(const DensityMatrix& rho, int q,
                                              Basis basis) {
  check_qubit(q, rho.num_qubits, "measure");
  DensityMatrix rotated = rho;
  rotate_to_z(rotated, q, basis);
  const std::size_t d = rotated.dim();
  const std::size_t mask = std::size_t{1} << q;
  std::array<DensityBranch, 2> out;
  for (int bit = 0; bit < 2; ++bit) {
    DensityMatrix branch;
    branch.num_qubits = rotated.num_qubits;
    branch.data.assign(rotated.data.size(), cplx{0, 0});
    double p = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      if (static_cast<int>((r & mask) != 0) != bit) continue;
      p += rotated.at(r, r).real();
    }
    out[bit].probability = std::max(0.0, p);
    if (out[bit].probability > kForcedBranchTol) {
      const double inv = 1.0 / p;
      for (std::size_t c = 0; c < d; ++c) {
        if (static_cast<int>((c & mask) != 0) != bit) continue;
        for (std::size_t r = 0; r < d; ++r) {
          if (static_cast<int>((r & mask) != 0) != bit) continue;
          branch.at(r, c) = rotated.at(r, c) * inv;
        }
      }
      out[bit].state = std::move(branch);
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep list");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_qubit(keep[i], rho.num_qubits, "partial_trace");
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      if (keep[i] == keep[j]) {
        throw std::invalid_argument("partial_trace: duplicate qubit " +
                                    std::to_string(keep[i]));
      }
    }
  }
  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 0; q < rho.num_qubits; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  auto place = [](std::size_t bits, const std::vector<int>& pos) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (bits & (std::size_t{1} << i)) out |= std::size_t{1} << pos[i];
    }
    return out;
  };
  DensityMatrix red;
  red.num_qubits = k;
  red.data.assign(std::size_t{1} << (2 * k), cplx{0, 0});
  const std::size_t dk = std::size_t{1} << k;
  const std::size_t dt = std::size_t{1} << traced.size();
  for (std::size_t c = 0; c < dk; ++c) {
    const std::size_t cbase = place(c, keep);
    for (std::size_t r = 0; r < dk; ++r) {
      const std::size_t rbase = place(r, keep);
      cplx acc{0, 0};
      for (std::size_t e = 0; e < dt; ++e) {
        const std::size_t off = place(e, traced);
        acc += rho.at(rbase | off, cbase | off);
      }
      red.at(r, c) = acc;
    }
  }
  return red;
}

PureState slice_qubit(const PureState& st, int q, int bit, double tol) {
  check_qubit(q, st.num_qubits, "slice_qubit");
  if (st.num_qubits < 2) throw std::invalid_argument("slice_qubit: width 1");
  PureState out;
  out.num_qubits = st.num_qubits - 1;
  out.amp.resize(st.amp.size() / 2);
  const std::size_t lowmask = (std::size_t{1} << q) - 1;
  double kept = 0.0;
  for (std::size_t i = 0; i < out.amp.size(); ++i) {
    const std::size_t src = ((i & ~lowmask) << 1) | (i & lowmask) |
                            (bit ? (std::size_t{1} << q) : 0);
    out.amp[i] = st.amp[src];
    kept += std::norm(out.amp[i]);
  }
  const double total = st.norm();
  if (total - kept > tol) {
    throw std::invalid_argument(
        "slice_qubit: qubit carries weight in the discarded branch");
  }
  const double inv = 1.0 / std::sqrt(kept);
  kernels::active().scale(out.amp.data(), out.amp.size(), cplx{inv, 0});
  return out;
}

namespace {

// phi(b) and flip mask such that P|b> = phi(b) |b ^ xmask>.
struct PauliAction {
  std::size_t xmask = 0;
  std::size_t ymask = 0;
  std::size_t zmask = 0;
  cplx base{1, 0};

  explicit PauliAction(const PauliString& p) {
    base = p.phase;
    int ycount = 0;
    for (int q = 0; q < p.size(); ++q) {
      const std::size_t m = std::size_t{1} << q;
      switch (p.letters[q]) {
        case Pauli::I: break;
        case Pauli::X: xmask |= m; break;
        case Pauli::Y: xmask |= m; ymask |= m; ++ycount; break;
        case Pauli::Z: zmask |= m; break;
      }
    }
    // Each Y contributes a factor i times (-1)^bit.
    cplx yi{1, 0};
    for (int i = 0; i < (ycount & 3); ++i) yi *= cplx{0, 1};
    base *= yi;
  }

  cplx phase(std::size_t b) const {
    const int sign = __builtin_parityll(b & (ymask | zmask));
    return sign ? -base : base;
  }
};

}  // namespace

double expectation(const PureState& st, const PauliString& p) {
  if (p.size() != st.num_qubits) {
    throw std::invalid_argument("expectation: width mismatch");
  }
  const PauliAction act(p);
  cplx acc{0, 0};
  for (std::size_t b = 0; b < st.amp.size(); ++b) {
    acc += std::conj(st.amp[b ^ act.xmask]) * act.phase(b) * st.amp[b];
  }
  return acc.real();
}

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (p.size() != rho.num_qubits) {
    throw std::invalid_argument("expectation: width mismatch");
  }
  // tr(P rho) = sum_c phi(c ^ x) rho[c ^ x, c]
  const PauliAction act(p);
  cplx acc{0, 0};
  for (std::size_t c = 0; c < rho.dim(); ++c) {
    const std::size_t r = c ^ act.xmask;
    acc += act.phase(r) * rho.at(r, c);
  }
  return acc.real();
}

double expectation(const DensityMatrix& rho, const std::vector<cplx>& obs) {
  const std::size_t d = rho.dim();
  if (obs.size() != d * d) {
    throw std::invalid_argument("expectation: observable dimension mismatch");
  }
  cplx acc{0, 0};
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      acc += obs[r * d + c] * rho.at(c, r);
    }
  }
  return acc.real();
}

cplx inner(const PureState& a, const PureState& b) {
  if (a.num_qubits != b.num_qubits) {
    throw std::invalid_argument("inner: width mismatch");
  }
  return kernels::active().inner(a.amp.data(), b.amp.data(), a.amp.size());
}

double overlap2(const PureState& a, const PureState& b) {
  return std::norm(inner(a, b));
}

PureState phi_plus() {
  PureState st = PureState::zeros(2);
  apply(st, Gate::h(0));
  apply(st, Gate::cx(0, 1));
  return st;
}

PureState g2_state() { return graph_state_vector(2, {{0, 1}}); }

PureState graph_state_vector(int n,
                             const std::vector<std::pair<int, int>>& edges) {
  PureState st = PureState::plus(n);
  for (const auto& [a, b] : edges) apply(st, Gate::cz(a, b));
  return st;
}

}  // namespace qnet
