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

#ifndef QNET_NOISE_HPP
#define QNET_NOISE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qnet/circuit.hpp"
#include "qnet/counts.hpp"
#include "qnet/state.hpp"

namespace qnet {

/// Single-qubit depolarizing model. Two-qubit gates take two independent
/// single-qubit errors, one per operand; measurement noise (one error on the
/// measured qubit before its basis change) is off by default.
struct NoiseModel {
  double epsilon = 0.0;
  bool noisy_measurement = false;

  void validate() const;
};

struct NoiseInsertion {
  std::size_t op_index;  // into Circuit::ops
  int qubit;
  double epsilon;
  bool before_op;  // true only for measurement noise
};

struct NoisyCircuit {
  Circuit base;
  std::vector<NoiseInsertion> insertions;

  std::size_t insertion_count() const { return insertions.size(); }
};

NoisyCircuit instrument(const Circuit& c, const NoiseModel& model);

/// Depolarizing channel on qubit q: the Pauli-mixture form
///   rho -> (1 - 3eps/4) rho + (eps/4)(X rho X + Y rho Y + Z rho Z),
/// which equals mixing with the maximally mixed marginal at rate eps.
/// Trajectory sampling uses the same four-term decomposition.
void depolarize(DensityMatrix& rho, int q, double epsilon);

struct Branch {
  std::vector<int> outcomes;  // per measurement, in op order
  double probability;         // joint probability of this outcome pattern
  DensityMatrix state;        // conditional state (measured qubits collapsed)
};

struct DensityRun {
  std::vector<Branch> branches;  // ordered by outcome pattern, lexicographic
  std::vector<std::pair<int, Basis>> measured;
};

/// Exact mixed-state evolution; forks one branch per measurement outcome.
/// Branches with probability below kForcedBranchTol are dropped.
DensityRun run_density(const NoisyCircuit& nc);

struct TrajectoryShot {
  std::uint64_t index;
  const PureState& state;
  const std::vector<int>& outcomes;
};

using ShotSink = std::function<void(const TrajectoryShot&)>;

/// Monte Carlo Pauli-trajectory sampling. Each shot gets the RNG stream
/// derived from (seed, shot index), so aggregates are independent of
/// evaluation order. Errors draw I with probability 1 - 3eps/4 and X, Y, Z
/// with eps/4 each.
void run_trajectories(const NoisyCircuit& nc, std::size_t shots,
                      std::uint64_t seed, const ShotSink& sink);

CountsTable run_trajectory_counts(const NoisyCircuit& nc, std::size_t shots,
                                  std::uint64_t seed);

}  // namespace qnet

#endif
