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

#ifndef QNET_PROTOCOLS_HPP
#define QNET_PROTOCOLS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnet/circuit.hpp"
#include "qnet/graph_state.hpp"
#include "qnet/topology.hpp"

namespace qnet {

enum class ProtocolKind {
  Swapping,
  LinearMbqc,
  MqncStep1,
  MqncStep2Onward,
  MqncFull,
};
const char* protocol_kind_name(ProtocolKind k);

struct Mode {
  enum class Kind { PostSelect, FeedForward };
  Kind kind = Kind::FeedForward;
  std::string pattern;  // one char per measurement, in measurement order

  static Mode post_select(std::string pattern) {
    return Mode{Kind::PostSelect, std::move(pattern)};
  }
  static Mode feed_forward() { return Mode{Kind::FeedForward, {}}; }
};

struct Correction {
  int qubit;  // logical
  LocalClifford op;
};

/// An executable protocol: logical circuit, device embedding, measurement
/// plan, expected target, and the graph model used for byproduct tracking.
/// Circuits act on compact logical indices; `embedding` maps them to the
/// physical qubits used for coupling validation and report labels.
struct ProtocolInstance {
  ProtocolKind kind;
  std::string name;
  std::vector<int> embedding;  // logical -> physical
  Mode mode;
  Circuit circuit;
  std::vector<std::pair<int, Basis>> measured;  // logical, in circuit order
  std::vector<int> terminals;                   // logical, ascending
  std::vector<std::pair<int, int>> pairs;       // logical terminal pairs
  PureState target;       // over terminals, ascending-order positions
  PureState pair_target;  // 2-qubit target per pair
  bool bell_transform_pairs = true;  // H on the pair's second qubit pre-CHSH

  // Graph model (empty graph_n for circuits that are not graph-backed).
  int graph_n = 0;
  std::vector<std::pair<int, int>> graph_edges;
  std::vector<std::pair<int, int>> final_graph_edges;

  int terminal_position(int logical) const;
  std::string pair_label(std::size_t i) const;  // physical ids, e.g. "0-11"
};

/// Entanglement swapping on a 4-qubit chain (end, mid, mid, end): two Bell
/// pairs, a CX+H Bell measurement on the middles, Pauli byproducts on the
/// ends. Default mode post-selects "00".
ProtocolInstance build_swapping(const std::vector<int>& embedding,
                                const DeviceTopology* topo = nullptr);

/// Linear cluster |G_n> with X measurements on the interior; endpoints end in
/// |G_2>. Default mode post-selects all-zero. `native_cz` keeps CZ gates
/// as-is instead of compiling each into H CX H.
ProtocolInstance build_linear_mbqc(int n, const std::vector<int>& embedding,
                                   const DeviceTopology* topo = nullptr,
                                   bool native_cz = false);

enum class MqncStage { Step1, Step2Onward, Full };

/// Measurement-based quantum network coding over the butterfly network.
///   Step2Onward: 6-qubit butterfly cluster (embedding order s1, s2, r1, r2,
///     t1, t2), X measurements on the two bottleneck qubits, crossing pairs
///     (s1,t1) and (s2,t2). Default mode post-selects "11".
///   Full: 14 qubits (7 link pairs held in graph form), intra-node CZ, Y
///     measurements shrink the network to the butterfly, then step 3 as
///     above. Simulation-scale; default mode feed-forward.
///   Step1: the 14-qubit graph state only, no measurements.
ProtocolInstance build_mqnc(MqncStage stage, const std::vector<int>& embedding,
                            const DeviceTopology* topo = nullptr,
                            bool native_cz = false);

std::vector<int> default_embedding(ProtocolKind kind, int chain_length = 4);

/// Corrections (per terminal) that map the conditional post-measurement state
/// for `outcomes` onto the instance target in the noiseless case.
std::vector<Correction> byproduct_correction(const ProtocolInstance& p,
                                             const std::vector<int>& outcomes);
void apply_corrections(PureState& st, const std::vector<Correction>& cs,
                       const std::vector<int>& qubit_positions);
void apply_corrections(DensityMatrix& rho, const std::vector<Correction>& cs,
                       const std::vector<int>& qubit_positions);

struct EmbeddingReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::string str() const;
};
EmbeddingReport validate_embedding(const DeviceTopology& topo,
                                   const ProtocolInstance& p);

/// Classical butterfly network coding: the bottleneck carries x XOR y and both
/// sinks decode with one further XOR.
std::pair<int, int> classical_butterfly(int x, int y);

}  // namespace qnet

#endif
