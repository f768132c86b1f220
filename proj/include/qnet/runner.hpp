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

#ifndef QNET_RUNNER_HPP
#define QNET_RUNNER_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/config.hpp"

namespace qnet {

/// Everything run() produced, ready to serialize. File output is byte-stable
/// for a fixed (config, seed): no wall-clock fields are emitted.
struct ResultRecord {
  nlohmann::ordered_json json;
  std::string csv_header;
  std::vector<std::string> csv_rows;
};

ResultRecord run(const ExperimentConfig& cfg);

std::string render_csv(const ResultRecord& rec);
/// Writes output_json / output_csv when the config names them.
void emit(const ResultRecord& rec, const ExperimentConfig& cfg);

/// Reads "epsilon,pair,F,F_stderr,S,S_stderr,seed" rows back into per-pair
/// (epsilon, S) series for epsilon_crit re-extraction.
struct SweepCsv {
  std::vector<std::string> pair_labels;
  std::vector<std::vector<double>> epsilon;  // per pair
  std::vector<std::vector<double>> s;        // per pair
};
SweepCsv parse_sweep_csv(const std::string& text);

}  // namespace qnet

#endif
