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

#include "qnet/noise.hpp"

#include <algorithm>
#include <stdexcept>

#include "qnet/kernels.hpp"
#include "qnet/rng.hpp"

namespace qnet {

void NoiseModel::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("noise epsilon must lie in [0, 1]");
  }
}

NoisyCircuit instrument(const Circuit& c, const NoiseModel& model) {
  model.validate();
  NoisyCircuit nc;
  nc.base = c;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Circuit::Op& op = c.ops[i];
    if (op.kind == Circuit::Op::Kind::Gate) {
      nc.insertions.push_back({i, op.gate.q0, model.epsilon, false});
      if (op.gate.arity() == 2) {
        nc.insertions.push_back({i, op.gate.q1, model.epsilon, false});
      }
    } else if (model.noisy_measurement) {
      nc.insertions.push_back({i, op.qubit, model.epsilon, true});
    }
  }
  return nc;
}

void depolarize(DensityMatrix& rho, int q, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("depolarize: epsilon outside [0, 1]");
  }
  if (q < 0 || q >= rho.num_qubits) {
    throw std::out_of_range("depolarize: qubit out of range");
  }
  if (epsilon == 0.0) return;
  const auto& k = kernels::active();
  const std::size_t n = rho.data.size();
  std::vector<cplx> acc(rho.data);
  k.scale(acc.data(), n, cplx{1.0 - 0.75 * epsilon, 0});
  DensityMatrix tmp;
  const GateKind paulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
  for (GateKind p : paulis) {
    tmp = rho;
    apply(tmp, Gate{p, q, -1});
    k.axpy(acc.data(), tmp.data.data(), n, cplx{0.25 * epsilon, 0});
  }
  rho.data = std::move(acc);
}

namespace {

struct InsertionIndex {
  std::vector<std::vector<const NoiseInsertion*>> before, after;

  explicit InsertionIndex(const NoisyCircuit& nc)
      : before(nc.base.ops.size()), after(nc.base.ops.size()) {
    for (const NoiseInsertion& ins : nc.insertions) {
      if (ins.op_index >= nc.base.ops.size()) {
        throw std::invalid_argument("noise insertion references missing op");
      }
      (ins.before_op ? before : after)[ins.op_index].push_back(&ins);
    }
  }
};

}  // namespace

DensityRun run_density(const NoisyCircuit& nc) {
  const Circuit& c = nc.base;
  const InsertionIndex idx(nc);

  DensityRun out;
  out.measured = c.measurements();

  std::vector<Branch> live;
  live.push_back(Branch{{}, 1.0, DensityMatrix::zeros_state(c.num_qubits)});

  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const Circuit::Op& op = c.ops[i];
    for (const NoiseInsertion* ins : idx.before[i]) {
      for (Branch& b : live) depolarize(b.state, ins->qubit, ins->epsilon);
    }
    if (op.kind == Circuit::Op::Kind::Gate) {
      for (Branch& b : live) apply(b.state, op.gate);
    } else {
      std::vector<Branch> next;
      next.reserve(live.size() * 2);
      for (Branch& b : live) {
        auto split = measure_branches(b.state, op.qubit, op.basis);
        for (int bit = 0; bit < 2; ++bit) {
          const double p = b.probability * split[bit].probability;
          if (p < kForcedBranchTol) continue;
          Branch nb;
          nb.outcomes = b.outcomes;
          nb.outcomes.push_back(bit);
          nb.probability = p;
          nb.state = std::move(split[bit].state);
          next.push_back(std::move(nb));
        }
      }
      live = std::move(next);
    }
    for (const NoiseInsertion* ins : idx.after[i]) {
      for (Branch& b : live) depolarize(b.state, ins->qubit, ins->epsilon);
    }
  }

  std::sort(live.begin(), live.end(), [](const Branch& a, const Branch& b) {
    return a.outcomes < b.outcomes;
  });
  out.branches = std::move(live);
  return out;
}

void run_trajectories(const NoisyCircuit& nc, std::size_t shots,
                      std::uint64_t seed, const ShotSink& sink) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  const Circuit& c = nc.base;
  const InsertionIndex idx(nc);

  for (std::size_t shot = 0; shot < shots; ++shot) {
    CounterRng rng = CounterRng::derive(seed, shot);
    PureState st = PureState::zeros(c.num_qubits);
    std::vector<int> outcomes;

    auto sample_pauli = [&](int qubit, double eps) {
      const double r = rng.next_double();
      if (r >= 0.75 * eps) return;  // identity branch
      const int which = static_cast<int>(r / (0.25 * eps));
      const GateKind pick[3] = {GateKind::X, GateKind::Y, GateKind::Z};
      apply(st, Gate{pick[std::min(which, 2)], qubit, -1});
    };

    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      const Circuit::Op& op = c.ops[i];
      for (const NoiseInsertion* ins : idx.before[i]) {
        sample_pauli(ins->qubit, ins->epsilon);
      }
      if (op.kind == Circuit::Op::Kind::Gate) {
        apply(st, op.gate);
      } else {
        outcomes.push_back(measure(st, op.qubit, op.basis, rng).bit);
      }
      for (const NoiseInsertion* ins : idx.after[i]) {
        sample_pauli(ins->qubit, ins->epsilon);
      }
    }
    sink(TrajectoryShot{shot, st, outcomes});
  }
}

CountsTable run_trajectory_counts(const NoisyCircuit& nc, std::size_t shots,
                                  std::uint64_t seed) {
  CountsTable table;
  run_trajectories(nc, shots, seed, [&](const TrajectoryShot& shot) {
    table.add(CountsTable::key_of(shot.outcomes));
  });
  return table;
}

}  // namespace qnet
