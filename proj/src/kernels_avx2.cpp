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

// AVX2+FMA kernels. A __m256d register holds two complex<double> values as
// [re0, im0, re1, im1]; complex times scalar uses the usual
// permute / fmaddsub sequence. This translation unit is the only one built
// with -mavx2 -mfma; dispatch happens at runtime.

#ifdef QNET_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <utility>

#include "qnet/kernels.hpp"

namespace qnet::kernels {

namespace {

// result = x * s for two packed complexes, s broadcast from (sr, si).
inline __m256d cmul_broadcast(__m256d x, __m256d sr, __m256d si) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);  // [im0, re0, im1, re1]
  return _mm256_fmaddsub_pd(x, sr, _mm256_mul_pd(xs, si));
}

void apply_matrix1_avx2(cplx* amp, std::size_t n_amp, int target,
                        const cplx* m) {
  double* p = reinterpret_cast<double*>(amp);
  const __m256d m00r = _mm256_set1_pd(m[0].real());
  const __m256d m00i = _mm256_set1_pd(m[0].imag());
  const __m256d m01r = _mm256_set1_pd(m[1].real());
  const __m256d m01i = _mm256_set1_pd(m[1].imag());
  const __m256d m10r = _mm256_set1_pd(m[2].real());
  const __m256d m10i = _mm256_set1_pd(m[2].imag());
  const __m256d m11r = _mm256_set1_pd(m[3].real());
  const __m256d m11i = _mm256_set1_pd(m[3].imag());

  if (target == 0) {
    // Amplitude pairs are adjacent: [a0, a1] in one register.
    const __m256d dr = _mm256_setr_pd(m[0].real(), m[0].real(), m[3].real(),
                                      m[3].real());
    const __m256d di = _mm256_setr_pd(m[0].imag(), m[0].imag(), m[3].imag(),
                                      m[3].imag());
    const __m256d or_ = _mm256_setr_pd(m[1].real(), m[1].real(), m[2].real(),
                                       m[2].real());
    const __m256d oi = _mm256_setr_pd(m[1].imag(), m[1].imag(), m[2].imag(),
                                      m[2].imag());
    for (std::size_t i = 0; i < n_amp; i += 2) {
      const __m256d a = _mm256_loadu_pd(p + 2 * i);
      const __m256d sw = _mm256_permute2f128_pd(a, a, 0x01);  // [a1, a0]
      const __m256d out = _mm256_add_pd(cmul_broadcast(a, dr, di),
                                        cmul_broadcast(sw, or_, oi));
      _mm256_storeu_pd(p + 2 * i, out);
    }
    return;
  }

  const std::size_t st = std::size_t{1} << target;
  for (std::size_t base = 0; base < n_amp; base += 2 * st) {
    for (std::size_t i = base; i < base + st; i += 2) {
      double* p0 = p + 2 * i;
      double* p1 = p + 2 * (i + st);
      const __m256d a0 = _mm256_loadu_pd(p0);
      const __m256d a1 = _mm256_loadu_pd(p1);
      const __m256d r0 = _mm256_add_pd(cmul_broadcast(a0, m00r, m00i),
                                       cmul_broadcast(a1, m01r, m01i));
      const __m256d r1 = _mm256_add_pd(cmul_broadcast(a0, m10r, m10i),
                                       cmul_broadcast(a1, m11r, m11i));
      _mm256_storeu_pd(p0, r0);
      _mm256_storeu_pd(p1, r1);
    }
  }
}

inline void swap_block(double* x, double* y, std::size_t n_cplx) {
  std::size_t i = 0;
  for (; i + 2 <= n_cplx; i += 2) {
    const __m256d a = _mm256_loadu_pd(x + 2 * i);
    const __m256d b = _mm256_loadu_pd(y + 2 * i);
    _mm256_storeu_pd(x + 2 * i, b);
    _mm256_storeu_pd(y + 2 * i, a);
  }
  for (; i < n_cplx; ++i) {
    std::swap(x[2 * i], y[2 * i]);
    std::swap(x[2 * i + 1], y[2 * i + 1]);
  }
}

void apply_cx_avx2(cplx* amp, std::size_t n_amp, int control, int target) {
  double* p = reinterpret_cast<double*>(amp);
  const std::size_t sc = std::size_t{1} << control;
  const std::size_t st = std::size_t{1} << target;
  const std::size_t s1 = std::max(sc, st);
  const std::size_t s0 = std::min(sc, st);
  const std::size_t o1 = (s1 == sc) ? sc : 0;
  const std::size_t o0 = (s0 == sc) ? sc : 0;
  for (std::size_t a = 0; a < n_amp; a += 2 * s1) {
    for (std::size_t b = a + o1; b < a + o1 + s1; b += 2 * s0) {
      const std::size_t i = b + o0;
      swap_block(p + 2 * i, p + 2 * (i + st), s0);
    }
  }
}

void apply_cz_avx2(cplx* amp, std::size_t n_amp, int q0, int q1) {
  double* p = reinterpret_cast<double*>(amp);
  const std::size_t sa = std::size_t{1} << q0;
  const std::size_t sb = std::size_t{1} << q1;
  const std::size_t s1 = std::max(sa, sb);
  const std::size_t s0 = std::min(sa, sb);
  const __m256d neg = _mm256_set1_pd(-0.0);
  for (std::size_t a = 0; a < n_amp; a += 2 * s1) {
    for (std::size_t b = a + s1; b < a + 2 * s1; b += 2 * s0) {
      double* q = p + 2 * (b + s0);
      std::size_t i = 0;
      for (; i + 2 <= s0; i += 2) {
        _mm256_storeu_pd(q + 2 * i,
                         _mm256_xor_pd(_mm256_loadu_pd(q + 2 * i), neg));
      }
      for (; i < s0; ++i) {
        q[2 * i] = -q[2 * i];
        q[2 * i + 1] = -q[2 * i + 1];
      }
    }
  }
}

void apply_swap_avx2(cplx* amp, std::size_t n_amp, int q0, int q1) {
  double* p = reinterpret_cast<double*>(amp);
  const std::size_t sa = std::size_t{1} << std::min(q0, q1);
  const std::size_t sb = std::size_t{1} << std::max(q0, q1);
  for (std::size_t a = 0; a < n_amp; a += 2 * sb) {
    for (std::size_t b = a + sb; b < a + 2 * sb; b += 2 * sa) {
      swap_block(p + 2 * b, p + 2 * (b - sb + sa), sa);
    }
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double norm_range(const double* q, std::size_t n_cplx) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n_cplx; i += 2) {
    const __m256d a = _mm256_loadu_pd(q + 2 * i);
    acc = _mm256_fmadd_pd(a, a, acc);
  }
  double tail = 0.0;
  for (; i < n_cplx; ++i) {
    tail += q[2 * i] * q[2 * i] + q[2 * i + 1] * q[2 * i + 1];
  }
  return hsum(acc) + tail;
}

double prob_zero_avx2(const cplx* amp, std::size_t n_amp, int target) {
  const double* p = reinterpret_cast<const double*>(amp);
  const std::size_t st = std::size_t{1} << target;
  double acc = 0.0;
  for (std::size_t a = 0; a < n_amp; a += 2 * st) {
    acc += norm_range(p + 2 * a, st);
  }
  return acc;
}

void project_avx2(cplx* amp, std::size_t n_amp, int target, int bit,
                  double scale) {
  double* p = reinterpret_cast<double*>(amp);
  const std::size_t st = std::size_t{1} << target;
  const __m256d sc = _mm256_set1_pd(scale);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t a = 0; a < n_amp; a += 2 * st) {
    double* keep = p + 2 * (a + (bit ? st : 0));
    double* kill = p + 2 * (a + (bit ? 0 : st));
    std::size_t i = 0;
    for (; i + 2 <= st; i += 2) {
      _mm256_storeu_pd(keep + 2 * i,
                       _mm256_mul_pd(_mm256_loadu_pd(keep + 2 * i), sc));
      _mm256_storeu_pd(kill + 2 * i, zero);
    }
    for (; i < st; ++i) {
      keep[2 * i] *= scale;
      keep[2 * i + 1] *= scale;
      kill[2 * i] = 0.0;
      kill[2 * i + 1] = 0.0;
    }
  }
}

double sum_norm_avx2(const cplx* amp, std::size_t n_amp) {
  return norm_range(reinterpret_cast<const double*>(amp), n_amp);
}

cplx inner_avx2(const cplx* a, const cplx* b, std::size_t n_amp) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n_amp; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    // re: ar*br + ai*bi ; im: ar*bi - ai*br
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    const __m256d vas = _mm256_permute_pd(va, 0b0101);  // [ai, ar, ...]
    acc_im = _mm256_fmadd_pd(vas, vb, acc_im);
  }
  // acc_re lanes: [ar*br, ai*bi, ...] -> plain sum.
  double re = hsum(acc_re);
  // acc_im lanes: [ai*br, ar*bi, ...] -> sum of (odd - even).
  const __m128d lo = _mm256_castpd256_pd128(acc_im);
  const __m128d hi = _mm256_extractf128_pd(acc_im, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s)) - _mm_cvtsd_f64(s);
  for (; i < n_amp; ++i) {
    re += pa[2 * i] * pb[2 * i] + pa[2 * i + 1] * pb[2 * i + 1];
    im += pa[2 * i] * pb[2 * i + 1] - pa[2 * i + 1] * pb[2 * i];
  }
  return {re, im};
}

void scale_avx2(cplx* amp, std::size_t n_amp, cplx s) {
  double* p = reinterpret_cast<double*>(amp);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n_amp; i += 2) {
    const __m256d x = _mm256_loadu_pd(p + 2 * i);
    _mm256_storeu_pd(p + 2 * i, cmul_broadcast(x, sr, si));
  }
  for (; i < n_amp; ++i) amp[i] *= s;
}

void axpy_avx2(cplx* y, const cplx* x, std::size_t n_amp, cplx a) {
  double* py = reinterpret_cast<double*>(y);
  const double* px = reinterpret_cast<const double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n_amp; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i,
                     _mm256_add_pd(vy, cmul_broadcast(vx, ar, ai)));
  }
  for (; i < n_amp; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {
      "avx2",          apply_matrix1_avx2, apply_cx_avx2,  apply_cz_avx2,
      apply_swap_avx2, prob_zero_avx2,     project_avx2,   sum_norm_avx2,
      inner_avx2,      scale_avx2,         axpy_avx2,
  };
  return ops;
}

}  // namespace qnet::kernels

#endif  // QNET_HAVE_AVX2
