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

#ifndef QNET_RNG_HPP
#define QNET_RNG_HPP

#include <cstdint>

namespace qnet {

/// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual std::uint64_t next_u64() = 0;

  /// Uniform in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
};

/// Counter-based stream: draw i of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, i). Streams derived from the same seed with
/// distinct ids are independent regardless of evaluation order, which is what
/// makes shot-parallel trajectory sampling reproducible.
class CounterRng final : public RandomSource {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng derive(std::uint64_t seed, std::uint64_t stream_id) {
    return CounterRng(mix64(mix64(seed) ^ (stream_id * 0xd1342543de82ef95ull +
                                           0x2545f4914f6cdd1dull)));
  }

  std::uint64_t next_u64() override { return mix64(key_ ^ counter_++); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qnet

#endif
