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

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qnet/analysis.hpp"
#include "qnet/rng.hpp"

using namespace qnet;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

DensityMatrix random_density(int n, CounterRng& rng, int rank = 3) {
  DensityMatrix rho = DensityMatrix::zeros_state(n);
  std::fill(rho.data.begin(), rho.data.end(), cplx{0, 0});
  double total = 0;
  std::vector<double> w(static_cast<std::size_t>(rank));
  for (auto& x : w) {
    x = rng.next_double() + 0.05;
    total += x;
  }
  for (int k = 0; k < rank; ++k) {
    PureState psi = PureState::zeros(n);
    double norm = 0;
    for (auto& a : psi.amp) {
      a = {rng.next_double() - 0.5, rng.next_double() - 0.5};
      norm += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (auto& a : psi.amp) a *= inv;
    const double p = w[static_cast<std::size_t>(k)] / total;
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      for (std::size_t r = 0; r < rho.dim(); ++r) {
        rho.at(r, c) += p * psi.amp[r] * std::conj(psi.amp[c]);
      }
    }
  }
  return rho;
}

// Literal nested-square-root form of the concurrence spectrum, as a test-side
// oracle for the product-form implementation.
double concurrence_nested_sqrt(const DensityMatrix& rho) {
  using EMat = Eigen::MatrixXcd;
  EMat m(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho.at(r, c);
    }
  }
  EMat yy = EMat::Zero(4, 4);
  // (Y x Y)(r, c) with qubit 0 the low bit.
  const cplx y[2][2] = {{{0, 0}, {0, -1}}, {{0, 1}, {0, 0}}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      yy(r, c) = y[r & 1][c & 1] * y[(r >> 1) & 1][(c >> 1) & 1];
    }
  }
  const EMat tilde = yy * m.conjugate() * yy;
  auto sqrtm = [](const EMat& a) {
    Eigen::SelfAdjointEigenSolver<EMat> es(a);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    for (Eigen::Index i = 0; i < 4; ++i) ev[i] = std::sqrt(ev[i]);
    return EMat(es.eigenvectors() * ev.asDiagonal() *
                es.eigenvectors().adjoint());
  };
  const EMat sr = sqrtm(m);
  const EMat r_mat = sqrtm(sr * tilde * sr);
  Eigen::SelfAdjointEigenSolver<EMat> es(r_mat);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    lam[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()[i]);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace

TEST_CASE("fidelity fixtures and properties") {
  CounterRng rng(1);
  const DensityMatrix rho = random_density(2, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

  const DensityMatrix zero = DensityMatrix::zeros_state(1);
  PureState one = PureState::zeros(1);
  apply(one, Gate::x(0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0).epsilon(1e-12));

  // F(Werner(1/4), |G2>) = 1/4: the state is I/4.
  CHECK(fidelity(werner_state(0.25), g2_state()) ==
        doctest::Approx(0.25).epsilon(1e-12));

  // Symmetry and pure-shortcut consistency on random pairs.
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix a = random_density(2, rng);
    const DensityMatrix b = random_density(2, rng);
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-9));
    CHECK(fidelity(a, b) >= -1e-12);
    CHECK(fidelity(a, b) <= 1.0 + 1e-12);

    PureState psi = PureState::zeros(2);
    psi.amp = phi_plus().amp;
    const DensityMatrix pure_dm = DensityMatrix::from_pure(psi);
    CHECK(fidelity(a, pure_dm) ==
          doctest::Approx(fidelity(a, psi)).epsilon(1e-9));
  }

  const DensityMatrix wide = DensityMatrix::zeros_state(3);
  CHECK_THROWS_AS(fidelity(rho, wide), std::invalid_argument);
}

TEST_CASE("werner state self-consistency") {
  CHECK(fidelity(werner_state(1.0), g2_state()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const DensityMatrix mixed = werner_state(0.25);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(std::abs(mixed.at(r, r) - cplx{0.25, 0}) < 1e-12);
  }
  for (double f = 0.25; f <= 1.0 + 1e-9; f += 0.05) {
    CHECK(std::abs(fidelity(werner_state(f), g2_state()) - f) < 1e-12);
  }
  CHECK_THROWS_AS(werner_state(0.2), std::invalid_argument);
  CHECK_THROWS_AS(werner_state(1.1), std::invalid_argument);
}

TEST_CASE("concurrence fixtures, closed form, and dual-route equivalence") {
  CHECK(concurrence(DensityMatrix::from_pure(phi_plus())) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(concurrence(DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // C(Werner(F)) = max(0, 2F - 1); at F = 0.9 this is 0.8.
  CHECK(concurrence(werner_state(0.9)) == doctest::Approx(0.8).epsilon(1e-9));
  for (double f = 0.25; f <= 1.0 + 1e-9; f += 0.05) {
    CHECK(std::abs(concurrence(werner_state(f)) - std::max(0.0, 2 * f - 1)) <
          1e-9);
  }

  // Product form vs the literal nested square roots on random states.
  CounterRng rng(77);
  for (int rep = 0; rep < 25; ++rep) {
    const DensityMatrix rho = random_density(2, rng);
    CHECK(concurrence(rho) ==
          doctest::Approx(concurrence_nested_sqrt(rho)).epsilon(1e-7));
  }
}

TEST_CASE("chsh fixtures") {
  const DensityMatrix bell = DensityMatrix::from_pure(phi_plus());
  CHECK(chsh_s(bell) == doctest::Approx(2 * kSqrt2).epsilon(1e-12));
  CHECK(chsh_s(DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Werner(0.5) in the Bell frame: S = 2 sqrt(2) / 3.
  CHECK(chsh_s(bell_frame(werner_state(0.5))) ==
        doctest::Approx(2 * kSqrt2 / 3).epsilon(1e-10));

  // Settings validation rejects a non +-1 observable.
  ChshSettings bad = ChshSettings::defaults();
  bad.b = {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};  // identity
  CHECK_THROWS_AS(chsh_s(bell, bad), std::invalid_argument);

  CHECK_THROWS_AS(chsh_s(DensityMatrix::zeros_state(1)),
                  std::invalid_argument);
}

TEST_CASE("chsh linearity and Tsirelson bound") {
  CounterRng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const DensityMatrix a = random_density(2, rng);
    const DensityMatrix b = random_density(2, rng);
    const double p = rng.next_double();
    DensityMatrix mix = a;
    for (std::size_t i = 0; i < mix.data.size(); ++i) {
      mix.data[i] = p * a.data[i] + (1 - p) * b.data[i];
    }
    CHECK(chsh_s(mix) ==
          doctest::Approx(p * chsh_s(a) + (1 - p) * chsh_s(b)).epsilon(1e-9));
    CHECK(std::abs(chsh_s(a)) <= 2 * kSqrt2 + 1e-6);
  }
}

TEST_CASE("werner_s closed form and threshold") {
  CHECK(werner_s(1.0) == doctest::Approx(2 * kSqrt2).epsilon(1e-12));
  CHECK(werner_s(0.25) == doctest::Approx(0.0).epsilon(1e-12));
  // Exact CHSH of the Bell-framed Werner state across the F grid.
  for (double f = 0.25; f <= 1.0 + 1e-9; f += 0.05) {
    CHECK(werner_s(f) ==
          doctest::Approx(chsh_s(bell_frame(werner_state(f)))).epsilon(1e-10));
  }
  // S crosses 2 at F = (1 + 3/sqrt(2))/4 ~ 0.780330.
  const double f_star = chsh_fidelity_threshold();
  CHECK(werner_s(f_star) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f_star == doctest::Approx(0.78033008588991).epsilon(1e-10));
}

TEST_CASE("chsh sampled estimate") {
  const DensityMatrix bell = DensityMatrix::from_pure(phi_plus());
  CounterRng rng(9);
  const Estimate est = chsh_s_sampled(bell, ChshSettings::defaults(), 4096, rng);
  CHECK(std::abs(est.value - 2 * kSqrt2) < 5 * std::max(est.std_error, 1e-3));
}

TEST_CASE("tomography exact reproduces the state") {
  const DensityMatrix bell = DensityMatrix::from_pure(phi_plus());
  const TomographyEstimate est = tomography_exact(bell);
  CHECK(est.method == "exact-expectation");
  CHECK(trace_distance(est.rho, bell) < 1e-10);
  CHECK(fidelity(est.rho, phi_plus()) == doctest::Approx(1.0).epsilon(1e-10));

  const DensityMatrix w = werner_state(0.7);
  CHECK(trace_distance(tomography_exact(w).rho, w) < 1e-10);
}

TEST_CASE("tomography from sampled counts") {
  const DensityMatrix bell = DensityMatrix::from_pure(phi_plus());
  CounterRng rng(123);
  const auto counts = sample_tomography_counts(bell, 8192, rng);
  REQUIRE(counts.size() == 9);
  const TomographyEstimate est = tomography_from_counts(2, counts);
  CHECK(est.method == "shot-sampled");
  CHECK(trace_distance(est.rho, bell) < 0.05);

  // Missing settings are rejected.
  auto broken = counts;
  broken.erase(broken.begin());
  CHECK_THROWS_AS(tomography_from_counts(2, broken), std::invalid_argument);

  // Zero-shot settings are rejected.
  auto zeroed = counts;
  zeroed.begin()->second = CountsTable{};
  CHECK_THROWS_AS(tomography_from_counts(2, zeroed), std::invalid_argument);
}

TEST_CASE("correlation matrix") {
  // Ideal |G_x>: H on the second qubit of each pair, then Z counts.
  PureState gx = graph_state_vector(4, {{0, 2}, {1, 3}});
  apply(gx, Gate::h(2));
  apply(gx, Gate::h(3));
  const DensityMatrix rho = DensityMatrix::from_pure(gx);
  const CorrelationMatrix exact = correlation_matrix_exact(rho);
  CHECK(exact.value[0][2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(exact.value[1][3] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(exact.value[0][1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(exact.value[0][3] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(exact.value[2][3] == doctest::Approx(0.0).epsilon(1e-10));

  // Degenerate product state |0000>: all entries 1.
  const CorrelationMatrix prod =
      correlation_matrix_exact(DensityMatrix::zeros_state(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(prod.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  // Counts-based estimate: sampled ideal state.
  CounterRng rng(321);
  const CountsTable counts = sample_counts(rho, 4096, rng);
  const CorrelationMatrix est = correlation_matrix(counts);
  CHECK(std::abs(est.value[0][2] - 1.0) <= 3 * est.std_error[0][2] + 1e-12);
  CHECK(std::abs(est.value[1][3] - 1.0) <= 3 * est.std_error[1][3] + 1e-12);
  CHECK(std::abs(est.value[0][1]) <= 3 * est.std_error[0][1]);

  CountsTable tiny;
  tiny.add("0000", 42);
  CHECK_THROWS_AS(correlation_matrix(tiny), std::invalid_argument);
}

TEST_CASE("epsilon_crit interpolation") {
  // Synthetic monotone curve S(eps) = 2 sqrt(2) (1 - eps)^3.
  std::vector<double> eps, s;
  for (int i = 0; i <= 40; ++i) {
    const double e = 0.3 * i / 40.0;
    eps.push_back(e);
    s.push_back(2 * kSqrt2 * std::pow(1 - e, 3));
  }
  bool smoothed = true;
  const auto root = epsilon_crit(eps, s, &smoothed);
  REQUIRE(root.has_value());
  CHECK(!smoothed);
  const double exact_root = 1 - std::pow(2 / (2 * kSqrt2), 1.0 / 3);
  CHECK(*root == doctest::Approx(exact_root).epsilon(1e-3));

  // Entirely above 2: absent.
  std::vector<double> seps = {0.0, 0.01};
  CHECK(!epsilon_crit(seps, {2.8, 2.5}, nullptr).has_value());
  // Entirely below 2: absent.
  CHECK(!epsilon_crit(seps, {1.9, 1.5}, nullptr).has_value());

  // Non-monotone sequence is smoothed before interpolation.
  std::vector<double> noisy_eps = {0.0, 0.01, 0.02, 0.03};
  std::vector<double> noisy_s = {2.5, 1.8, 2.1, 1.2};
  const auto r2 = epsilon_crit(noisy_eps, noisy_s, &smoothed);
  CHECK(smoothed);
  REQUIRE(r2.has_value());
  CHECK(*r2 > 0.0);
  CHECK(*r2 < 0.03);
}

TEST_CASE("exact sweep: endpoints and monotonicity") {
  const ProtocolInstance p = build_mqnc(
      MqncStage::Step2Onward, default_embedding(ProtocolKind::MqncStep2Onward));
  SweepOptions opt;
  opt.grid = linspace(0.0, 0.05, 11);
  const SweepResult res = epsilon_sweep(p, opt);
  REQUIRE(res.points.size() == 11);
  CHECK(res.points[0].pairs[0].F.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.points[0].pairs[0].S.value ==
        doctest::Approx(2 * kSqrt2).epsilon(1e-9));
  for (std::size_t pi = 0; pi < 2; ++pi) {
    for (std::size_t i = 1; i < res.points.size(); ++i) {
      CHECK(res.points[i].pairs[pi].F.value <
            res.points[i - 1].pairs[pi].F.value);
      CHECK(res.points[i].pairs[pi].S.value <
            res.points[i - 1].pairs[pi].S.value);
    }
  }
  CHECK(!res.smoothed);
}

TEST_CASE("trajectory sweep produces sane estimates") {
  const ProtocolInstance p = build_mqnc(
      MqncStage::Step2Onward, default_embedding(ProtocolKind::MqncStep2Onward));
  SweepOptions opt;
  opt.grid = {0.0, 0.03};
  opt.mode = SweepMode::Trajectories;
  opt.shots = 2048;
  opt.repeats = 3;
  opt.seed = 99;
  const SweepResult res = epsilon_sweep(p, opt);
  REQUIRE(res.points.size() == 2);
  // Noiseless point sits at (F, S) = (1, 2 sqrt 2) up to sampling noise and
  // the downward bias of the PSD projection at finite shots.
  CHECK(res.points[0].pairs[0].F.value > 0.95);
  CHECK(res.points[0].pairs[0].S.value > 2 * kSqrt2 - 0.2);
  // Noisy point: exact-mode value within a few standard errors.
  const ExactProtocolResult exact = run_protocol_exact(p, NoiseModel{0.03, false});
  const double se = std::max(res.points[1].pairs[0].S.std_error, 0.02);
  CHECK(std::abs(res.points[1].pairs[0].S.value - exact.pairs[0].S.value) <
        6 * se);
}

TEST_CASE("linspace") {
  const auto g = linspace(0.0, 0.05, 21);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(0.0025).epsilon(1e-12));
}
