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

#include "qnet/circuit.hpp"

#include <stdexcept>

namespace qnet {

int Circuit::count_gates1() const {
  int n = 0;
  for (const Op& op : ops) {
    if (op.kind == Op::Kind::Gate && op.gate.arity() == 1) ++n;
  }
  return n;
}

int Circuit::count_gates2() const {
  int n = 0;
  for (const Op& op : ops) {
    if (op.kind == Op::Kind::Gate && op.gate.arity() == 2) ++n;
  }
  return n;
}

int Circuit::count_measurements() const {
  int n = 0;
  for (const Op& op : ops) {
    if (op.kind == Op::Kind::Measure) ++n;
  }
  return n;
}

std::vector<std::pair<int, Basis>> Circuit::measurements() const {
  std::vector<std::pair<int, Basis>> out;
  for (const Op& op : ops) {
    if (op.kind == Op::Kind::Measure) out.emplace_back(op.qubit, op.basis);
  }
  return out;
}

CircuitRun run_pure(const Circuit& c, RandomSource& rnd) {
  CircuitRun run;
  run.state = PureState::zeros(c.num_qubits);
  for (const Circuit::Op& op : c.ops) {
    if (op.kind == Circuit::Op::Kind::Gate) {
      apply(run.state, op.gate);
    } else {
      const MeasureResult r = measure(run.state, op.qubit, op.basis, rnd);
      run.outcomes.push_back(r.bit);
      run.probability *= r.probability;
    }
  }
  return run;
}

CircuitRun run_pure_forced(const Circuit& c, const std::vector<int>& outcomes) {
  if (static_cast<int>(outcomes.size()) != c.count_measurements()) {
    throw std::invalid_argument("run_pure_forced: outcome count mismatch");
  }
  CircuitRun run;
  run.state = PureState::zeros(c.num_qubits);
  std::size_t next = 0;
  for (const Circuit::Op& op : c.ops) {
    if (op.kind == Circuit::Op::Kind::Gate) {
      apply(run.state, op.gate);
    } else {
      const MeasureResult r =
          measure_forced(run.state, op.qubit, op.basis, outcomes[next++]);
      run.outcomes.push_back(r.bit);
      run.probability *= r.probability;
    }
  }
  return run;
}

}  // namespace qnet
