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

#ifndef QNET_COUNTS_HPP
#define QNET_COUNTS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace qnet {

/// Histogram over outcome bitstrings. Keys use one '0'/'1' character per
/// recorded bit, in record order (first measured bit leftmost). std::map
/// keeps emission deterministic.
struct CountsTable {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;

  void add(const std::string& key, std::size_t n = 1) {
    counts[key] += n;
    total += n;
  }
  static std::string key_of(const std::vector<int>& bits) {
    std::string k(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) k[i] = '1';
    }
    return k;
  }
};

}  // namespace qnet

#endif
