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

// Reference kernels. Plain loops, no intrinsics; the AVX2 backend is checked
// against these on random inputs.

#include <algorithm>
#include <utility>

#include "qnet/kernels.hpp"

namespace qnet::kernels {

namespace {

void apply_matrix1_scalar(cplx* amp, std::size_t n_amp, int target,
                          const cplx* m) {
  const std::size_t st = std::size_t{1} << target;
  for (std::size_t base = 0; base < n_amp; base += 2 * st) {
    for (std::size_t i = base; i < base + st; ++i) {
      const cplx a0 = amp[i];
      const cplx a1 = amp[i + st];
      amp[i] = m[0] * a0 + m[1] * a1;
      amp[i + st] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_cx_scalar(cplx* amp, std::size_t n_amp, int control, int target) {
  const std::size_t sc = std::size_t{1} << control;
  const std::size_t st = std::size_t{1} << target;
  const std::size_t s1 = std::max(sc, st);
  const std::size_t s0 = std::min(sc, st);
  const std::size_t o1 = (s1 == sc) ? sc : 0;  // control bit 1, target bit 0
  const std::size_t o0 = (s0 == sc) ? sc : 0;
  for (std::size_t a = 0; a < n_amp; a += 2 * s1) {
    for (std::size_t b = a + o1; b < a + o1 + s1; b += 2 * s0) {
      for (std::size_t i = b + o0; i < b + o0 + s0; ++i) {
        std::swap(amp[i], amp[i + st]);
      }
    }
  }
}

void apply_cz_scalar(cplx* amp, std::size_t n_amp, int q0, int q1) {
  const std::size_t sa = std::size_t{1} << q0;
  const std::size_t sb = std::size_t{1} << q1;
  const std::size_t s1 = std::max(sa, sb);
  const std::size_t s0 = std::min(sa, sb);
  for (std::size_t a = 0; a < n_amp; a += 2 * s1) {
    for (std::size_t b = a + s1; b < a + 2 * s1; b += 2 * s0) {
      for (std::size_t i = b + s0; i < b + 2 * s0; ++i) {
        amp[i] = -amp[i];
      }
    }
  }
}

void apply_swap_scalar(cplx* amp, std::size_t n_amp, int q0, int q1) {
  const std::size_t sa = std::size_t{1} << std::min(q0, q1);
  const std::size_t sb = std::size_t{1} << std::max(q0, q1);
  // Swap amplitudes of |...1...0...> and |...0...1...> (bits q1,q0).
  for (std::size_t a = 0; a < n_amp; a += 2 * sb) {
    for (std::size_t b = a + sb; b < a + 2 * sb; b += 2 * sa) {
      for (std::size_t i = b; i < b + sa; ++i) {
        std::swap(amp[i], amp[i - sb + sa]);
      }
    }
  }
}

double prob_zero_scalar(const cplx* amp, std::size_t n_amp, int target) {
  const std::size_t st = std::size_t{1} << target;
  double acc = 0.0;
  for (std::size_t a = 0; a < n_amp; a += 2 * st) {
    for (std::size_t i = a; i < a + st; ++i) {
      acc += amp[i].real() * amp[i].real() + amp[i].imag() * amp[i].imag();
    }
  }
  return acc;
}

void project_scalar(cplx* amp, std::size_t n_amp, int target, int bit,
                    double scale) {
  const std::size_t st = std::size_t{1} << target;
  for (std::size_t a = 0; a < n_amp; a += 2 * st) {
    const std::size_t keep = a + (bit ? st : 0);
    const std::size_t kill = a + (bit ? 0 : st);
    for (std::size_t i = 0; i < st; ++i) {
      amp[keep + i] *= scale;
      amp[kill + i] = cplx{0.0, 0.0};
    }
  }
}

double sum_norm_scalar(const cplx* amp, std::size_t n_amp) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n_amp; ++i) {
    acc += amp[i].real() * amp[i].real() + amp[i].imag() * amp[i].imag();
  }
  return acc;
}

cplx inner_scalar(const cplx* a, const cplx* b, std::size_t n_amp) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n_amp; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void scale_scalar(cplx* amp, std::size_t n_amp, cplx s) {
  for (std::size_t i = 0; i < n_amp; ++i) amp[i] *= s;
}

void axpy_scalar(cplx* y, const cplx* x, std::size_t n_amp, cplx a) {
  for (std::size_t i = 0; i < n_amp; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",          apply_matrix1_scalar, apply_cx_scalar,
      apply_cz_scalar,   apply_swap_scalar,    prob_zero_scalar,
      project_scalar,    sum_norm_scalar,      inner_scalar,
      scale_scalar,      axpy_scalar,
  };
  return ops;
}

}  // namespace qnet::kernels
