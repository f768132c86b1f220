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

#ifndef QNET_CONFIG_HPP
#define QNET_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnet/analysis.hpp"
#include "qnet/protocols.hpp"

namespace qnet {

/// Experiment manifest: INI-style text with [section] headers and key = value
/// lines; '#' and ';' start comments. Unknown sections or keys are errors.
struct ExperimentConfig {
  enum class Kind { Protocol, Sweep, Tomography, Chsh };

  Kind kind = Kind::Protocol;
  std::uint64_t seed = 12345;
  std::size_t shots = 8192;
  int trials = 5;
  std::string output_json;  // empty: no file
  std::string output_csv;

  struct Protocol {
    ProtocolKind kind = ProtocolKind::MqncStep2Onward;
    int chain_length = 4;            // linear-mbqc only
    std::string topology = "tokyo";  // preset, "none", or a file path
    std::vector<int> embedding;      // empty: per-protocol default
    std::optional<Mode::Kind> mode;  // unset: per-protocol default
    std::optional<std::string> pattern;
    bool native_cz = false;
    std::string engine = "auto";  // auto | exact | trajectories
  } protocol;

  struct Noise {
    double epsilon = 0.0;
    bool noisy_measurement = false;
  } noise;

  struct Sweep {
    double start = 0.0;
    double stop = 0.05;
    int points = 101;
    SweepMode mode = SweepMode::Exact;
    int repeats = 10;
  } sweep;

  struct Tomography {
    std::string state = "phi-plus";  // phi-plus | g2 | werner
    double werner_f = 0.7;
    bool sampled = false;
  } tomography;

  struct Chsh {
    std::string state = "phi-plus";  // phi-plus | g2 | werner | werner-curve
    double werner_f = 0.7;
    bool sampled = false;
    int curve_points = 16;
  } chsh;

  static ExperimentConfig parse(const std::string& text,
                                const std::string& origin = "<string>");
  static ExperimentConfig load(const std::string& path);
  /// Apply one "section.key=value" override (CLI flags route through this).
  void set(const std::string& dotted_key, const std::string& value);
  std::string serialize() const;
  /// Semantic checks beyond parsing (topology resolvable, ranges, ...).
  void validate() const;

  /// Loaded topology, or nullopt for "none".
  std::optional<DeviceTopology> resolve_topology() const;
  ProtocolInstance build_protocol() const;
};

const char* experiment_kind_name(ExperimentConfig::Kind k);

}  // namespace qnet

#endif
