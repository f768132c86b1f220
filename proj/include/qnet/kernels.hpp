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

#ifndef QNET_KERNELS_HPP
#define QNET_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

namespace qnet::kernels {

using cplx = std::complex<double>;

/// Amplitude-array primitives shared by the pure-state and (vectorized)
/// density-matrix simulators. Every function exists in a scalar reference
/// version and, on x86-64, an AVX2+FMA version selected at runtime. Both
/// backends implement identical contracts; the test suite checks them
/// against each other on random inputs.
///
/// Conventions: `n_amp` is a power of two, qubit q addresses bit q of the
/// amplitude index (qubit 0 = least-significant bit), and 1-qubit matrices
/// are row-major [m00, m01, m10, m11].
struct Ops {
  const char* name;

  void (*apply_matrix1)(cplx* amp, std::size_t n_amp, int target,
                        const cplx* m);
  void (*apply_cx)(cplx* amp, std::size_t n_amp, int control, int target);
  void (*apply_cz)(cplx* amp, std::size_t n_amp, int q0, int q1);
  void (*apply_swap)(cplx* amp, std::size_t n_amp, int q0, int q1);

  /// Sum of |amp[i]|^2 over indices with bit `target` clear.
  double (*prob_zero)(const cplx* amp, std::size_t n_amp, int target);
  /// Zero the branch with bit `target` == !bit and scale the kept branch.
  void (*project)(cplx* amp, std::size_t n_amp, int target, int bit,
                  double scale);

  double (*sum_norm)(const cplx* amp, std::size_t n_amp);
  cplx (*inner)(const cplx* a, const cplx* b, std::size_t n_amp);
  void (*scale)(cplx* amp, std::size_t n_amp, cplx s);
  void (*axpy)(cplx* y, const cplx* x, std::size_t n_amp, cplx a);
};

enum class Backend { scalar, avx2 };

bool avx2_supported();

/// Backend by enum; throws std::invalid_argument if unavailable on this CPU.
const Ops& get(Backend backend);

/// The active backend: AVX2 when supported, scalar otherwise. The
/// QNET_KERNELS environment variable ("scalar" or "avx2") overrides the
/// default at first use; select() overrides programmatically.
const Ops& active();
void select(Backend backend);

const Ops& scalar_ops();
#ifdef QNET_HAVE_AVX2
const Ops& avx2_ops();
#endif

}  // namespace qnet::kernels

#endif
