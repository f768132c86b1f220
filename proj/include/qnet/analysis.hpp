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

#ifndef QNET_ANALYSIS_HPP
#define QNET_ANALYSIS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnet/counts.hpp"
#include "qnet/noise.hpp"
#include "qnet/protocols.hpp"
#include "qnet/state.hpp"

namespace qnet {

// -- state metrics -----------------------------------------------------------

/// Uhlmann fidelity [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2; symmetric, in
/// [0, 1], and equal to <psi|rho|psi> when sigma = |psi><psi|.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const DensityMatrix& rho, const PureState& psi);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Wootters concurrence of a 2-qubit state, from the spectrum of
/// sqrt(rho) rho~ sqrt(rho) with rho~ = (Y x Y) rho* (Y x Y).
double concurrence(const DensityMatrix& rho);

// -- Werner model -------------------------------------------------------------

/// (4F-1)/3 |G2><G2| + (1-F)/3 I, valid for F in [1/4, 1].
DensityMatrix werner_state(double F);
/// CHSH value of the Bell-frame Werner state: 2 sqrt(2) (4F - 1) / 3.
double werner_s(double F);
/// Fidelity where werner_s crosses 2: (1 + 3/sqrt(2)) / 4 ~ 0.7803.
double chsh_fidelity_threshold();

// -- CHSH ---------------------------------------------------------------------

struct ChshSettings {
  std::array<cplx, 4> a, ap, b, bp;  // 2x2 Hermitian, eigenvalues +-1
  static ChshSettings defaults();    // A=X, A'=Z, B=H, B'=ZHZ
  void validate() const;
};

/// S = <AB> - <AB'> + <A'B> + <A'B'> by exact trace evaluation.
double chsh_s(const DensityMatrix& rho, const ChshSettings& settings);
double chsh_s(const DensityMatrix& rho);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};
/// Shot-sampled S: the settings decompose onto the 9 Pauli correlation
/// settings, each estimated from `shots` samples.
Estimate chsh_s_sampled(const DensityMatrix& rho, const ChshSettings& settings,
                        std::size_t shots, RandomSource& rnd);

/// H on the pair's second qubit: |G2>-frame states to the Bell (|Phi+>) frame.
DensityMatrix bell_frame(const DensityMatrix& pair);

// -- tomography ---------------------------------------------------------------

struct TomographyEstimate {
  DensityMatrix rho;
  std::string method;  // "exact-expectation" or "shot-sampled"
  std::size_t shots_per_setting = 0;
  bool projected = false;  // eigenvalue clipping applied
};

using PauliSetting = std::vector<Basis>;
std::vector<PauliSetting> all_settings(int k);

/// Linear inversion from exact expectations; reproduces the input bit-for-bit.
TomographyEstimate tomography_exact(const DensityMatrix& rho);
/// Computational-basis counts after rotating into each of the 3^k settings.
std::map<PauliSetting, CountsTable> sample_tomography_counts(
    const DensityMatrix& rho, std::size_t shots, RandomSource& rnd);
/// Linear inversion from sampled counts; each Pauli term averages over every
/// compatible setting. Non-PSD estimates are clipped and renormalized.
TomographyEstimate tomography_from_counts(
    int k, const std::map<PauliSetting, CountsTable>& counts);

/// Sample `shots` computational-basis outcomes from a state (k <= 4 wide).
CountsTable sample_counts(const DensityMatrix& rho, std::size_t shots,
                          RandomSource& rnd);
CountsTable sample_counts(const PureState& psi, std::size_t shots,
                          RandomSource& rnd);

// -- correlation matrix ---------------------------------------------------------

struct CorrelationMatrix {
  std::array<std::array<double, 4>, 4> value{};
  std::array<std::array<double, 4>, 4> std_error{};
  std::size_t shots = 0;
};
/// <Z_i Z_j> over 4 qubits from counts (entries in [-1, 1]); throws below 100
/// shots. Diagonal is 1 by construction.
CorrelationMatrix correlation_matrix(const CountsTable& z_counts);
CorrelationMatrix correlation_matrix_exact(const DensityMatrix& rho4);

// -- protocol execution ---------------------------------------------------------

struct PairMetrics {
  std::string label;  // physical ids, e.g. "0-11"
  Estimate F;         // fidelity with the pair target (G2 or Phi+)
  Estimate S;         // CHSH in the Bell frame
  double C = 0.0;     // concurrence (exact mode only)
};

struct ExactProtocolResult {
  DensityRun run;
  double selected_probability = 1.0;  // post-select mode
  DensityMatrix terminal_state;       // corrected, over terminals
  double target_fidelity = 0.0;
  std::vector<PairMetrics> pairs;
};
ExactProtocolResult run_protocol_exact(const ProtocolInstance& p,
                                       const NoiseModel& noise);

struct TrajectoryProtocolResult {
  CountsTable outcomes;              // raw measurement records
  std::size_t kept_shots = 0;        // after post-selection
  DensityMatrix terminal_state;      // mean corrected terminal state
  double target_fidelity = 0.0;      // of the mean state
  std::vector<PairMetrics> pairs;    // metrics of the mean state
};
TrajectoryProtocolResult run_protocol_trajectories(const ProtocolInstance& p,
                                                   const NoiseModel& noise,
                                                   std::size_t shots,
                                                   std::uint64_t seed);

/// Z-basis counts over the (corrected, Bell-framed) terminals, one 4-bit
/// record per kept shot.
CountsTable correlation_counts(const ProtocolInstance& p,
                               const NoiseModel& noise, std::size_t shots,
                               std::uint64_t seed);

// -- sweeps ----------------------------------------------------------------------

enum class SweepMode { Exact, Trajectories };

struct SweepOptions {
  std::vector<double> grid;
  SweepMode mode = SweepMode::Exact;
  std::size_t shots = 1024;
  int repeats = 10;
  std::uint64_t seed = 1;
  bool noisy_measurement = false;
};

struct SweepPoint {
  double epsilon;
  std::vector<PairMetrics> pairs;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::string> pair_labels;
  std::vector<std::optional<double>> epsilon_crit;  // per pair
  bool smoothed = false;  // non-monotone S repaired before root finding
};

SweepResult epsilon_sweep(const ProtocolInstance& p, const SweepOptions& opt);

/// Root of S(eps) = 2 by piecewise-linear interpolation on a descending
/// series; empty when the series never brackets 2. Sets `smoothed` when the
/// input had to be monotonized (pool-adjacent-violators) first.
std::optional<double> epsilon_crit(const std::vector<double>& eps,
                                   const std::vector<double>& s,
                                   bool* smoothed = nullptr);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace qnet

#endif
