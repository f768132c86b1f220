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

#include "qnet/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnet {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(key + ": expected a boolean, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  }
}

std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(parse_int(item, key)));
  }
  return out;
}

ProtocolKind parse_protocol_kind(const std::string& v, const std::string& key) {
  if (v == "swapping") return ProtocolKind::Swapping;
  if (v == "linear-mbqc") return ProtocolKind::LinearMbqc;
  if (v == "mqnc-step1") return ProtocolKind::MqncStep1;
  if (v == "mqnc-step2" || v == "mqnc-step2-onward") {
    return ProtocolKind::MqncStep2Onward;
  }
  if (v == "mqnc-full") return ProtocolKind::MqncFull;
  throw std::invalid_argument(key + ": unknown protocol kind '" + v + "'");
}

std::string join_embedding(const std::vector<int>& emb) {
  std::string out;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(emb[i]);
  }
  return out;
}

}  // namespace

const char* experiment_kind_name(ExperimentConfig::Kind k) {
  switch (k) {
    case ExperimentConfig::Kind::Protocol: return "protocol";
    case ExperimentConfig::Kind::Sweep: return "sweep";
    case ExperimentConfig::Kind::Tomography: return "tomography";
    case ExperimentConfig::Kind::Chsh: return "chsh";
  }
  return "?";
}

void ExperimentConfig::set(const std::string& dotted_key,
                           const std::string& raw_value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw std::invalid_argument("override key must be section.key, got '" +
                                dotted_key + "'");
  }
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  const std::string value = trim(raw_value);
  const std::string ctx = section + "." + key;

  if (section == "experiment") {
    if (key == "kind") {
      if (value == "protocol") kind = Kind::Protocol;
      else if (value == "sweep") kind = Kind::Sweep;
      else if (value == "tomography") kind = Kind::Tomography;
      else if (value == "chsh") kind = Kind::Chsh;
      else throw std::invalid_argument(ctx + ": unknown experiment kind '" + value + "'");
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(parse_int(value, ctx));
    } else if (key == "shots") {
      const long long v = parse_int(value, ctx);
      if (v < 1) throw std::invalid_argument(ctx + ": shots must be >= 1");
      shots = static_cast<std::size_t>(v);
    } else if (key == "trials") {
      trials = static_cast<int>(parse_int(value, ctx));
      if (trials < 1) throw std::invalid_argument(ctx + ": trials must be >= 1");
    } else if (key == "output_json") {
      output_json = value;
    } else if (key == "output_csv") {
      output_csv = value;
    } else {
      throw std::invalid_argument("unknown config key: " + ctx);
    }
    return;
  }
  if (section == "protocol") {
    if (key == "kind") protocol.kind = parse_protocol_kind(value, ctx);
    else if (key == "chain_length") {
      protocol.chain_length = static_cast<int>(parse_int(value, ctx));
    } else if (key == "topology") protocol.topology = value;
    else if (key == "embedding") protocol.embedding = parse_int_list(value, ctx);
    else if (key == "mode") {
      if (value == "post-select") protocol.mode = Mode::Kind::PostSelect;
      else if (value == "feed-forward") protocol.mode = Mode::Kind::FeedForward;
      else throw std::invalid_argument(ctx + ": unknown mode '" + value + "'");
    } else if (key == "pattern") protocol.pattern = value;
    else if (key == "native_cz") protocol.native_cz = parse_bool(value, ctx);
    else if (key == "engine") {
      if (value != "auto" && value != "exact" && value != "trajectories") {
        throw std::invalid_argument(ctx + ": unknown engine '" + value + "'");
      }
      protocol.engine = value;
    } else throw std::invalid_argument("unknown config key: " + ctx);
    return;
  }
  if (section == "noise") {
    if (key == "epsilon") noise.epsilon = parse_double(value, ctx);
    else if (key == "noisy_measurement") {
      noise.noisy_measurement = parse_bool(value, ctx);
    } else throw std::invalid_argument("unknown config key: " + ctx);
    return;
  }
  if (section == "sweep") {
    if (key == "epsilon_start") sweep.start = parse_double(value, ctx);
    else if (key == "epsilon_stop") sweep.stop = parse_double(value, ctx);
    else if (key == "points") {
      sweep.points = static_cast<int>(parse_int(value, ctx));
    } else if (key == "mode") {
      if (value == "exact") sweep.mode = SweepMode::Exact;
      else if (value == "trajectories") sweep.mode = SweepMode::Trajectories;
      else throw std::invalid_argument(ctx + ": unknown sweep mode '" + value + "'");
    } else if (key == "repeats") {
      sweep.repeats = static_cast<int>(parse_int(value, ctx));
    } else throw std::invalid_argument("unknown config key: " + ctx);
    return;
  }
  if (section == "tomography") {
    if (key == "state") tomography.state = value;
    else if (key == "werner_f") tomography.werner_f = parse_double(value, ctx);
    else if (key == "mode") {
      if (value == "exact") tomography.sampled = false;
      else if (value == "sampled") tomography.sampled = true;
      else throw std::invalid_argument(ctx + ": unknown tomography mode '" + value + "'");
    } else throw std::invalid_argument("unknown config key: " + ctx);
    return;
  }
  if (section == "chsh") {
    if (key == "state") chsh.state = value;
    else if (key == "werner_f") chsh.werner_f = parse_double(value, ctx);
    else if (key == "mode") {
      if (value == "exact") chsh.sampled = false;
      else if (value == "sampled") chsh.sampled = true;
      else throw std::invalid_argument(ctx + ": unknown chsh mode '" + value + "'");
    } else if (key == "curve_points") {
      chsh.curve_points = static_cast<int>(parse_int(value, ctx));
    } else throw std::invalid_argument("unknown config key: " + ctx);
    return;
  }
  throw std::invalid_argument("unknown config section: [" + section + "]");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text,
                                         const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument(where + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw std::invalid_argument(where + ": empty section name");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(where + ": expected key = value");
    }
    if (section.empty()) {
      throw std::invalid_argument(where + ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      cfg.set(section + "." + key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "kind = " << experiment_kind_name(kind) << "\n";
  out << "seed = " << seed << "\n";
  out << "shots = " << shots << "\n";
  out << "trials = " << trials << "\n";
  if (!output_json.empty()) out << "output_json = " << output_json << "\n";
  if (!output_csv.empty()) out << "output_csv = " << output_csv << "\n";

  out << "\n[protocol]\n";
  out << "kind = " << protocol_kind_name(protocol.kind) << "\n";
  if (protocol.kind == ProtocolKind::LinearMbqc) {
    out << "chain_length = " << protocol.chain_length << "\n";
  }
  out << "topology = " << protocol.topology << "\n";
  if (!protocol.embedding.empty()) {
    out << "embedding = " << join_embedding(protocol.embedding) << "\n";
  }
  if (protocol.mode) {
    out << "mode = "
        << (*protocol.mode == Mode::Kind::PostSelect ? "post-select"
                                                     : "feed-forward")
        << "\n";
  }
  if (protocol.pattern) out << "pattern = " << *protocol.pattern << "\n";
  out << "native_cz = " << (protocol.native_cz ? "true" : "false") << "\n";
  out << "engine = " << protocol.engine << "\n";

  out << "\n[noise]\n";
  out << "epsilon = " << noise.epsilon << "\n";
  out << "noisy_measurement = " << (noise.noisy_measurement ? "true" : "false")
      << "\n";

  if (kind == Kind::Sweep) {
    out << "\n[sweep]\n";
    out << "epsilon_start = " << sweep.start << "\n";
    out << "epsilon_stop = " << sweep.stop << "\n";
    out << "points = " << sweep.points << "\n";
    out << "mode = "
        << (sweep.mode == SweepMode::Exact ? "exact" : "trajectories") << "\n";
    out << "repeats = " << sweep.repeats << "\n";
  }
  if (kind == Kind::Tomography) {
    out << "\n[tomography]\n";
    out << "state = " << tomography.state << "\n";
    if (tomography.state == "werner") {
      out << "werner_f = " << tomography.werner_f << "\n";
    }
    out << "mode = " << (tomography.sampled ? "sampled" : "exact") << "\n";
  }
  if (kind == Kind::Chsh) {
    out << "\n[chsh]\n";
    out << "state = " << chsh.state << "\n";
    if (chsh.state == "werner") out << "werner_f = " << chsh.werner_f << "\n";
    if (chsh.state == "werner-curve") {
      out << "curve_points = " << chsh.curve_points << "\n";
    }
    out << "mode = " << (chsh.sampled ? "sampled" : "exact") << "\n";
  }
  return out.str();
}

std::optional<DeviceTopology> ExperimentConfig::resolve_topology() const {
  if (protocol.topology == "none") return std::nullopt;
  if (DeviceTopology::is_preset(protocol.topology)) {
    return DeviceTopology::preset(protocol.topology);
  }
  return DeviceTopology::from_file(protocol.topology);
}

ProtocolInstance ExperimentConfig::build_protocol() const {
  const std::optional<DeviceTopology> topo = resolve_topology();
  const DeviceTopology* tp = topo ? &*topo : nullptr;
  std::vector<int> emb = protocol.embedding;
  if (emb.empty()) emb = default_embedding(protocol.kind, protocol.chain_length);

  ProtocolInstance p;
  switch (protocol.kind) {
    case ProtocolKind::Swapping:
      p = build_swapping(emb, tp);
      break;
    case ProtocolKind::LinearMbqc:
      p = build_linear_mbqc(protocol.chain_length, emb, tp, protocol.native_cz);
      break;
    case ProtocolKind::MqncStep1:
      p = build_mqnc(MqncStage::Step1, emb, tp, protocol.native_cz);
      break;
    case ProtocolKind::MqncStep2Onward:
      p = build_mqnc(MqncStage::Step2Onward, emb, tp, protocol.native_cz);
      break;
    case ProtocolKind::MqncFull:
      p = build_mqnc(MqncStage::Full, emb, tp, protocol.native_cz);
      break;
  }
  if (protocol.mode) {
    if (*protocol.mode == Mode::Kind::FeedForward) {
      p.mode = Mode::feed_forward();
    } else {
      std::string pat = protocol.pattern.value_or(p.mode.pattern);
      p.mode = Mode::post_select(pat);
    }
  } else if (protocol.pattern) {
    p.mode = Mode::post_select(*protocol.pattern);
  }
  if (p.mode.kind == Mode::Kind::PostSelect &&
      p.mode.pattern.size() != p.measured.size()) {
    throw std::invalid_argument(
        "protocol.pattern: length " + std::to_string(p.mode.pattern.size()) +
        " does not match " + std::to_string(p.measured.size()) +
        " measurements");
  }
  return p;
}

void ExperimentConfig::validate() const {
  if (shots < 1) throw std::invalid_argument("experiment.shots must be >= 1");
  if (trials < 1) throw std::invalid_argument("experiment.trials must be >= 1");
  NoiseModel nm{noise.epsilon, noise.noisy_measurement};
  nm.validate();
  if (kind == Kind::Sweep) {
    if (sweep.points < 1) {
      throw std::invalid_argument("sweep.points must be >= 1");
    }
    if (sweep.repeats < 1) {
      throw std::invalid_argument("sweep.repeats must be >= 1");
    }
    if (!(sweep.start >= 0.0 && sweep.stop <= 1.0 && sweep.start < sweep.stop)) {
      throw std::invalid_argument("sweep range must satisfy 0 <= start < stop <= 1");
    }
  }
  if (kind == Kind::Tomography) {
    if (tomography.state != "phi-plus" && tomography.state != "g2" &&
        tomography.state != "werner") {
      throw std::invalid_argument("tomography.state: unknown fixture '" +
                                  tomography.state + "'");
    }
  }
  if (kind == Kind::Chsh) {
    if (chsh.state != "phi-plus" && chsh.state != "g2" &&
        chsh.state != "werner" && chsh.state != "werner-curve") {
      throw std::invalid_argument("chsh.state: unknown fixture '" + chsh.state +
                                  "'");
    }
    if (chsh.curve_points < 2) {
      throw std::invalid_argument("chsh.curve_points must be >= 2");
    }
  }
  if (kind == Kind::Protocol || kind == Kind::Sweep) {
    build_protocol();  // embedding / topology / pattern checks
  }
}

}  // namespace qnet
