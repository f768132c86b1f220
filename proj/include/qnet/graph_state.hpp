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

#ifndef QNET_GRAPH_STATE_HPP
#define QNET_GRAPH_STATE_HPP

#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qnet/state.hpp"

namespace qnet {

/// One of the 24 single-qubit Clifford operations, canonicalized up to global
/// phase. Composition, adjoints and Pauli conjugation run on tables generated
/// once from the H/S matrix group.
class LocalClifford {
 public:
  LocalClifford() = default;  // identity

  static LocalClifford identity();
  static LocalClifford h();
  static LocalClifford s();
  static LocalClifford sdg();
  static LocalClifford x();
  static LocalClifford y();
  static LocalClifford z();
  static LocalClifford sqrt_iy();   // sqrt(+iY), a 45-degree real rotation
  static LocalClifford sqrt_miy();  // sqrt(-iY)
  static LocalClifford from_matrix(const std::array<cplx, 4>& m);

  /// Matrix product: (a * b) acts as "apply b, then a".
  LocalClifford operator*(const LocalClifford& rhs) const;
  LocalClifford adjoint() const;
  /// U p U^dagger = sign * result (sign is +1 or -1).
  std::pair<Pauli, int> conjugate_pauli(Pauli p) const;

  const std::array<cplx, 4>& matrix() const;
  bool is_identity() const { return idx_ == 0; }
  bool is_pauli() const;
  int index() const { return idx_; }
  /// Shortest H/S word generating this element ("I", "H", "SH", ...).
  const std::string& word() const;

  bool operator==(const LocalClifford& o) const { return idx_ == o.idx_; }
  bool operator!=(const LocalClifford& o) const { return idx_ != o.idx_; }

 private:
  explicit LocalClifford(int idx) : idx_(static_cast<std::uint8_t>(idx)) {}
  std::uint8_t idx_ = 0;
};

/// Graph state with per-vertex local-Clifford frame: the represented state is
/// (tensor_v frame[v]) |G> over the present vertices. Measuring a vertex
/// rewrites the graph with the standard X/Y/Z rules, folds the byproduct
/// operators into the neighbors' frames, and removes the vertex.
class GraphState {
 public:
  explicit GraphState(int n);
  static GraphState from_edges(int n,
                               const std::vector<std::pair<int, int>>& edges);

  int universe_size() const { return static_cast<int>(adj_.size()); }
  bool present(int v) const;
  std::vector<int> vertices() const;
  int num_present() const;
  const std::set<int>& neighbors(int v) const;
  bool has_edge(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;

  LocalClifford frame(int v) const;
  void set_frame(int v, LocalClifford f);

  void add_edge(int u, int v);
  void toggle_edge(int u, int v);
  /// Complement the subgraph induced by the neighborhood of v (graph only;
  /// frames untouched).
  void local_complement(int v);

  /// Measured-basis outcome that is forced by the state, or -1 when the
  /// outcome is balanced 50/50. Only an X measurement of a vertex whose
  /// bare-graph image is isolated is deterministic.
  int determined_outcome(int v, Basis basis) const;

  /// Forces the given outcome (0: +1 eigenvalue, 1: -1 eigenvalue). Throws
  /// when the vertex is absent or the outcome has probability zero.
  void measure_vertex(int v, Basis basis, int outcome);

  PureState to_statevector() const;
  /// Stabilizer generators over present vertices, ascending vertex order.
  std::vector<PauliString> stabilizers() const;

 private:
  struct BareDispatch {
    Pauli effective;
    int outcome;
  };
  BareDispatch dispatch(int v, Basis basis, int outcome) const;
  void bare_measure_z(int v, int outcome);
  void bare_measure_y(int v, int outcome);
  void bare_measure_x(int v, int outcome);
  void compose_frame(int v, LocalClifford correction);
  void remove_vertex(int v);
  void check_present(int v, const char* what) const;

  std::vector<std::set<int>> adj_;
  std::vector<LocalClifford> frame_;
  std::vector<bool> present_;
};

}  // namespace qnet

#endif
