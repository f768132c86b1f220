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

#include "qnet/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qnet::kernels {

bool avx2_supported() {
#ifdef QNET_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& get(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return scalar_ops();
    case Backend::avx2:
#ifdef QNET_HAVE_AVX2
      if (avx2_supported()) return avx2_ops();
#endif
      throw std::invalid_argument("avx2 kernel backend not supported here");
  }
  throw std::invalid_argument("unknown kernel backend");
}

namespace {

const Ops* g_active = nullptr;

const Ops* detect() {
  if (const char* env = std::getenv("QNET_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0) return &get(Backend::avx2);
    throw std::invalid_argument(
        "QNET_KERNELS must be 'scalar' or 'avx2'");
  }
  return avx2_supported() ? &get(Backend::avx2) : &scalar_ops();
}

}  // namespace

const Ops& active() {
  if (!g_active) g_active = detect();
  return *g_active;
}

void select(Backend backend) { g_active = &get(backend); }

}  // namespace qnet::kernels
