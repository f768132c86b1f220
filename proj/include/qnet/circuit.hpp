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

#ifndef QNET_CIRCUIT_HPP
#define QNET_CIRCUIT_HPP

#include <utility>
#include <vector>

#include "qnet/state.hpp"

namespace qnet {

/// Ordered gate / measurement program. Measurement records accumulate in op
/// order; a measurement's basis change (X: H, Y: Sdg H) is part of the
/// measurement step, not a separate gate op.
struct Circuit {
  struct Op {
    enum class Kind { Gate, Measure };
    Kind kind = Kind::Gate;
    Gate gate{GateKind::H, -1, -1};
    int qubit = -1;       // Measure
    Basis basis = Basis::Z;
  };

  int num_qubits = 0;
  std::vector<Op> ops;

  Circuit() = default;
  explicit Circuit(int n) : num_qubits(n) {}

  void add(const Gate& g) {
    Op op;
    op.kind = Op::Kind::Gate;
    op.gate = g;
    ops.push_back(op);
  }
  void measure(int q, Basis b) {
    Op op;
    op.kind = Op::Kind::Measure;
    op.qubit = q;
    op.basis = b;
    ops.push_back(op);
  }

  int count_gates1() const;
  int count_gates2() const;
  int count_measurements() const;
  std::vector<std::pair<int, Basis>> measurements() const;
};

struct CircuitRun {
  PureState state;
  std::vector<int> outcomes;  // one per measurement, in op order
  double probability = 1.0;   // product of realized branch probabilities
};

CircuitRun run_pure(const Circuit& c, RandomSource& rnd);
/// Forces every measurement outcome; throws when a branch is impossible.
CircuitRun run_pure_forced(const Circuit& c, const std::vector<int>& outcomes);

}  // namespace qnet

#endif
