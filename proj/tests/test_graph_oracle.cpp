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

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qnet/graph_state.hpp"
#include "qnet/rng.hpp"
#include "qnet/state.hpp"

using namespace qnet;

namespace {

// State-vector replica of a graph measurement sequence. Returns the
// post-measurement pure state over remaining vertices (ascending order).
struct SvReplica {
  PureState state;
  std::vector<int> alive;  // ascending original vertex ids

  SvReplica(int n, const std::vector<std::pair<int, int>>& edges)
      : state(graph_state_vector(n, edges)) {
    for (int v = 0; v < n; ++v) alive.push_back(v);
  }

  int position(int v) const {
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (alive[i] == v) return static_cast<int>(i);
    }
    REQUIRE(false);
    return -1;
  }

  double prob(int v, Basis b, int bit) const {
    return outcome_probability(state, position(v), b, bit);
  }

  void measure(int v, Basis b, int bit) {
    const int pos = position(v);
    measure_forced(state, pos, b, bit);
    state = slice_qubit(state, pos, bit);
    alive.erase(alive.begin() + pos);
  }
};

}  // namespace

TEST_CASE("local clifford group basics") {
  CHECK(LocalClifford::identity().is_identity());
  CHECK((LocalClifford::h() * LocalClifford::h()).is_identity());
  CHECK((LocalClifford::s() * LocalClifford::sdg()).is_identity());
  CHECK(LocalClifford::s() * LocalClifford::s() == LocalClifford::z());
  CHECK(LocalClifford::x().is_pauli());
  CHECK(!LocalClifford::h().is_pauli());
  CHECK(LocalClifford::h().adjoint() == LocalClifford::h());
  CHECK(LocalClifford::s().adjoint() == LocalClifford::sdg());

  // H X H = Z, H Z H = X, S X Sdg = Y
  auto [p1, s1] = LocalClifford::h().conjugate_pauli(Pauli::X);
  CHECK(p1 == Pauli::Z);
  CHECK(s1 == 1);
  auto [p2, s2] = LocalClifford::s().conjugate_pauli(Pauli::X);
  CHECK(p2 == Pauli::Y);
  CHECK(s2 == 1);
  auto [p3, s3] = LocalClifford::sdg().conjugate_pauli(Pauli::X);
  CHECK(p3 == Pauli::Y);
  CHECK(s3 == -1);

  // sqrt(+iY) squared is iY up to phase, i.e. equals the Y Pauli element.
  CHECK(LocalClifford::sqrt_iy() * LocalClifford::sqrt_iy() ==
        LocalClifford::y());
  CHECK(LocalClifford::sqrt_miy() * LocalClifford::sqrt_miy() ==
        LocalClifford::y());
}

TEST_CASE("graph_from_edges fixtures") {
  // Single edge -> |G2> with amplitudes (1,1,1,-1)/2.
  const GraphState g2 = GraphState::from_edges(2, {{0, 1}});
  const PureState sv = g2.to_statevector();
  CHECK(std::abs(sv.amp[0] - cplx{0.5, 0}) < 1e-10);
  CHECK(std::abs(sv.amp[1] - cplx{0.5, 0}) < 1e-10);
  CHECK(std::abs(sv.amp[2] - cplx{0.5, 0}) < 1e-10);
  CHECK(std::abs(sv.amp[3] - cplx{-0.5, 0}) < 1e-10);
  CHECK(overlap2(sv, g2_state()) == doctest::Approx(1.0).epsilon(1e-10));

  // Empty edge set on 2 vertices -> |++>.
  const GraphState bare = GraphState::from_edges(2, {});
  CHECK(overlap2(bare.to_statevector(), PureState::plus(2)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Single vertex -> |+>.
  const GraphState one(1);
  CHECK(overlap2(one.to_statevector(), PureState::plus(1)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(GraphState::from_edges(3, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("plus states plus chain CZ match the oracle construction") {
  PureState st = PureState::plus(3);
  apply(st, Gate::cz(0, 1));
  apply(st, Gate::cz(1, 2));
  const GraphState g = GraphState::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(overlap2(st, g.to_statevector()) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("measurement rewrite rules on paths") {
  // Path 0-1-2-3, X-measure the interior -> edge {0,3} (frames absorbed).
  for (int o1 = 0; o1 < 2; ++o1) {
    for (int o2 = 0; o2 < 2; ++o2) {
      GraphState g = GraphState::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
      g.measure_vertex(1, Basis::X, o1);
      g.measure_vertex(2, Basis::X, o2);
      CHECK(g.vertices() == std::vector<int>{0, 3});
      CHECK(g.has_edge(0, 3));
    }
  }

  // Y-measure the middle of 0-1-2 -> edge {0,2}.
  GraphState y = GraphState::from_edges(3, {{0, 1}, {1, 2}});
  y.measure_vertex(1, Basis::Y, 0);
  CHECK(y.vertices() == std::vector<int>{0, 2});
  CHECK(y.has_edge(0, 2));

  // Z-measure a leaf deletes it and keeps the rest.
  GraphState z = GraphState::from_edges(3, {{0, 1}, {1, 2}});
  z.measure_vertex(0, Basis::Z, 1);
  CHECK(z.vertices() == std::vector<int>{1, 2});
  CHECK(z.has_edge(1, 2));

  GraphState absent = GraphState::from_edges(2, {{0, 1}});
  absent.measure_vertex(0, Basis::Z, 0);
  CHECK_THROWS_AS(absent.measure_vertex(0, Basis::Z, 0),
                  std::invalid_argument);
}

TEST_CASE("oracle equivalence against the state-vector simulator") {
  // 200 random (graph, measurement sequence, outcomes) cases, n <= 8.
  CounterRng rng(2026);
  int cases = 0;
  while (cases < 200) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.next_double() < 0.45) edges.emplace_back(a, b);
      }
    }
    GraphState oracle = GraphState::from_edges(n, edges);
    SvReplica sv(n, edges);

    const int measurements = 1 + static_cast<int>(rng.next_u64() %
                                                  static_cast<unsigned>(n - 1));
    for (int m = 0; m < measurements; ++m) {
      const auto verts = oracle.vertices();
      const int v = verts[rng.next_u64() % verts.size()];
      const Basis b = static_cast<Basis>(rng.next_u64() % 3);
      int bit = static_cast<int>(rng.next_u64() & 1);
      if (sv.prob(v, b, bit) < 1e-9) bit ^= 1;  // keep the branch feasible
      const double p_sv = sv.prob(v, b, bit);
      REQUIRE(p_sv > 1e-9);

      // Deterministic outcomes must agree with the state-vector probability.
      const int det = oracle.determined_outcome(v, b);
      if (det >= 0) {
        CHECK(sv.prob(v, b, det) == doctest::Approx(1.0).epsilon(1e-9));
      } else {
        CHECK(p_sv == doctest::Approx(0.5).epsilon(1e-9));
      }

      oracle.measure_vertex(v, b, bit);
      sv.measure(v, b, bit);
    }

    const PureState oracle_sv = oracle.to_statevector();
    CHECK(overlap2(oracle_sv, sv.state) == doctest::Approx(1.0).epsilon(1e-9));

    // Stabilizer consistency: every generator fixes the state.
    for (const PauliString& gen : oracle.stabilizers()) {
      CHECK(expectation(oracle_sv, gen) == doctest::Approx(1.0).epsilon(1e-9));
    }
    ++cases;
  }
}

TEST_CASE("outcome independence after correction") {
  // Both outcomes of any measurement leave the same bare graph; only the
  // frames differ, so frame-corrected states coincide.
  CounterRng rng(555);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 5);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.next_double() < 0.5) edges.emplace_back(a, b);
      }
    }
    const int v = static_cast<int>(rng.next_u64() % static_cast<unsigned>(n));
    const Basis b = static_cast<Basis>(rng.next_u64() % 3);

    GraphState g0 = GraphState::from_edges(n, edges);
    if (g0.determined_outcome(v, b) >= 0) continue;
    GraphState g1 = GraphState::from_edges(n, edges);
    g0.measure_vertex(v, b, 0);
    g1.measure_vertex(v, b, 1);

    CHECK(g0.edges() == g1.edges());
    // Strip frames: the bare graph states coincide.
    for (int u : g0.vertices()) {
      g0.set_frame(u, LocalClifford::identity());
      g1.set_frame(u, LocalClifford::identity());
    }
    CHECK(overlap2(g0.to_statevector(), g1.to_statevector()) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("statevector width limit") {
  GraphState g(kMaxPureQubits + 1);
  CHECK_THROWS_AS(g.to_statevector(), std::invalid_argument);
}

TEST_CASE("forced zero-probability branch throws") {
  // Isolated vertex measured in X is deterministic +1.
  GraphState g(2);
  CHECK(g.determined_outcome(0, Basis::X) == 0);
  CHECK_THROWS_AS(g.measure_vertex(0, Basis::X, 1), std::invalid_argument);
  // With a Z frame the determined outcome flips.
  g.set_frame(1, LocalClifford::z());
  CHECK(g.determined_outcome(1, Basis::X) == 1);
  CHECK_THROWS_AS(g.measure_vertex(1, Basis::X, 0), std::invalid_argument);
}
