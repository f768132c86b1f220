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

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qnet/kernels.hpp"
#include "qnet/rng.hpp"

using namespace qnet;
using kernels::cplx;

namespace {

std::vector<cplx> random_state(int n, CounterRng& rng) {
  std::vector<cplx> amp(std::size_t{1} << n);
  double norm = 0;
  for (auto& a : amp) {
    a = {rng.next_double() - 0.5, rng.next_double() - 0.5};
    norm += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (auto& a : amp) a *= inv;
  return amp;
}

std::array<cplx, 4> random_unitary(CounterRng& rng) {
  const double th = rng.next_double() * 3.14159265358979;
  const double a = rng.next_double() * 6.2831853;
  const double b = rng.next_double() * 6.2831853;
  const cplx ea = std::polar(1.0, a);
  const cplx eb = std::polar(1.0, b);
  const double c = std::cos(th), s = std::sin(th);
  return {ea * c, eb * s, -std::conj(eb) * s, std::conj(ea) * c};
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

bool have_avx2() { return kernels::avx2_supported(); }

}  // namespace

TEST_CASE("scalar and avx2 backends agree on random programs") {
  if (!have_avx2()) return;  // scalar-only host
  const auto& sc = kernels::get(kernels::Backend::scalar);
  const auto& vx = kernels::get(kernels::Backend::avx2);
  CounterRng rng(41);

  for (int n = 1; n <= 8; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int rep = 0; rep < 8; ++rep) {
      auto base = random_state(n, rng);

      for (int t = 0; t < n; ++t) {
        const auto u = random_unitary(rng);
        auto a = base, b = base;
        sc.apply_matrix1(a.data(), dim, t, u.data());
        vx.apply_matrix1(b.data(), dim, t, u.data());
        CHECK(max_diff(a, b) < 1e-13);
        CHECK(std::abs(sc.prob_zero(a.data(), dim, t) -
                       vx.prob_zero(a.data(), dim, t)) < 1e-13);
      }
      for (int q0 = 0; q0 < n; ++q0) {
        for (int q1 = 0; q1 < n; ++q1) {
          if (q0 == q1) continue;
          auto a = base, b = base;
          sc.apply_cx(a.data(), dim, q0, q1);
          vx.apply_cx(b.data(), dim, q0, q1);
          CHECK(max_diff(a, b) == 0.0);
          sc.apply_cz(a.data(), dim, q0, q1);
          vx.apply_cz(b.data(), dim, q0, q1);
          CHECK(max_diff(a, b) == 0.0);
          sc.apply_swap(a.data(), dim, q0, q1);
          vx.apply_swap(b.data(), dim, q0, q1);
          CHECK(max_diff(a, b) == 0.0);
        }
      }
      CHECK(std::abs(sc.sum_norm(base.data(), dim) -
                     vx.sum_norm(base.data(), dim)) < 1e-13);
      auto other = random_state(n, rng);
      CHECK(std::abs(sc.inner(base.data(), other.data(), dim) -
                     vx.inner(base.data(), other.data(), dim)) < 1e-13);

      auto a = base, b = base;
      const cplx scale{0.3, -0.7};
      sc.scale(a.data(), dim, scale);
      vx.scale(b.data(), dim, scale);
      CHECK(max_diff(a, b) < 1e-14);
      sc.axpy(a.data(), other.data(), dim, cplx{-0.2, 0.9});
      vx.axpy(b.data(), other.data(), dim, cplx{-0.2, 0.9});
      CHECK(max_diff(a, b) < 1e-14);

      for (int bit = 0; bit < 2; ++bit) {
        auto pa = base, pb = base;
        sc.project(pa.data(), dim, n - 1, bit, 1.25);
        vx.project(pb.data(), dim, n - 1, bit, 1.25);
        CHECK(max_diff(pa, pb) == 0.0);
      }
    }
  }
}

TEST_CASE("apply_matrix1 matches dense matrix multiplication") {
  const auto& ops = kernels::active();
  CounterRng rng(7);
  for (int n = 1; n <= 4; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int t = 0; t < n; ++t) {
      const auto u = random_unitary(rng);
      auto st = random_state(n, rng);

      // Dense oracle: apply I x..x U x..x I entry by entry.
      std::vector<cplx> want(dim, cplx{0, 0});
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
          if ((r & ~(std::size_t{1} << t)) != (c & ~(std::size_t{1} << t))) {
            continue;
          }
          const int rb = static_cast<int>((r >> t) & 1);
          const int cb = static_cast<int>((c >> t) & 1);
          want[r] += u[static_cast<std::size_t>(rb * 2 + cb)] * st[c];
        }
      }
      auto got = st;
      ops.apply_matrix1(got.data(), dim, t, u.data());
      CHECK(max_diff(got, want) < 1e-12);
    }
  }
}

TEST_CASE("cx/cz/swap kernels match their permutation and sign definitions") {
  const auto& ops = kernels::active();
  CounterRng rng(11);
  const int n = 5;
  const std::size_t dim = 1u << n;
  for (int q0 = 0; q0 < n; ++q0) {
    for (int q1 = 0; q1 < n; ++q1) {
      if (q0 == q1) continue;
      const auto st = random_state(n, rng);

      auto got = st;
      ops.apply_cx(got.data(), dim, q0, q1);
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t src =
            (i >> q0) & 1 ? i ^ (std::size_t{1} << q1) : i;
        CHECK(got[i] == st[src]);
      }

      got = st;
      ops.apply_cz(got.data(), dim, q0, q1);
      for (std::size_t i = 0; i < dim; ++i) {
        const bool both = ((i >> q0) & 1) && ((i >> q1) & 1);
        CHECK(got[i] == (both ? -st[i] : st[i]));
      }

      got = st;
      ops.apply_swap(got.data(), dim, q0, q1);
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t b0 = (i >> q0) & 1;
        const std::size_t b1 = (i >> q1) & 1;
        std::size_t src =
            i & ~((std::size_t{1} << q0) | (std::size_t{1} << q1));
        src |= (b1 << q0) | (b0 << q1);
        CHECK(got[i] == st[src]);
      }
    }
  }
}

TEST_CASE("backend lookup") {
  CHECK(std::string(kernels::get(kernels::Backend::scalar).name) == "scalar");
  if (have_avx2()) {
    CHECK(std::string(kernels::get(kernels::Backend::avx2).name) == "avx2");
  } else {
    CHECK_THROWS_AS((void)kernels::get(kernels::Backend::avx2),
                    std::invalid_argument);
  }
}
