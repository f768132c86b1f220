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

#include "qnet/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qnet/rng.hpp"
#include "qnet/version.hpp"

namespace qnet {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json pair_json(const PairMetrics& pm, const char* estimator) {
  json j;
  j["pair"] = pm.label;
  j["F"] = pm.F.value;
  j["F_stderr"] = pm.F.std_error;
  j["S"] = pm.S.value;
  j["S_stderr"] = pm.S.std_error;
  j["concurrence"] = pm.C;
  j["estimator"] = estimator;
  return j;
}

DensityMatrix fixture_state(const std::string& name, double werner_f) {
  if (name == "phi-plus") return DensityMatrix::from_pure(phi_plus());
  if (name == "g2") return DensityMatrix::from_pure(g2_state());
  if (name == "werner") return werner_state(werner_f);
  throw std::invalid_argument("unknown fixture state: " + name);
}

// Fixture pair states in the |G2> frame move to the Bell frame before CHSH,
// matching the protocol pipeline; |Phi+> is already there.
bool fixture_needs_bell_frame(const std::string& name) {
  return name == "g2" || name == "werner";
}

void run_protocol_experiment(const ExperimentConfig& cfg, ResultRecord* rec) {
  const ProtocolInstance p = cfg.build_protocol();
  const NoiseModel nm{cfg.noise.epsilon, cfg.noise.noisy_measurement};

  std::string engine = cfg.protocol.engine;
  if (engine == "auto") {
    engine = p.circuit.num_qubits <= kMaxDensityQubits ? "exact"
                                                       : "trajectories";
  }

  json& out = rec->json["result"];
  out["protocol"] = p.name;
  out["mode"] = p.mode.kind == Mode::Kind::PostSelect
                    ? "post-select(" + p.mode.pattern + ")"
                    : "feed-forward";
  out["engine"] = engine;

  rec->csv_header = "pair,F,F_stderr,S,S_stderr,concurrence,seed";
  if (engine == "exact") {
    const ExactProtocolResult res = run_protocol_exact(p, nm);
    out["target_fidelity"] = res.target_fidelity;
    out["selected_probability"] = res.selected_probability;
    json branches = json::array();
    for (const Branch& b : res.run.branches) {
      json bj;
      bj["outcomes"] = CountsTable::key_of(b.outcomes);
      bj["probability"] = b.probability;
      branches.push_back(bj);
    }
    out["branches"] = branches;
    out["pairs"] = json::array();
    for (const PairMetrics& pm : res.pairs) {
      out["pairs"].push_back(pair_json(pm, "exact"));
      rec->csv_rows.push_back(pm.label + "," + fmt(pm.F.value) + ",0," +
                              fmt(pm.S.value) + ",0," + fmt(pm.C) + "," +
                              std::to_string(cfg.seed));
    }
  } else {
    const TrajectoryProtocolResult res =
        run_protocol_trajectories(p, nm, cfg.shots, cfg.seed);
    out["target_fidelity"] = res.target_fidelity;
    out["shots"] = cfg.shots;
    out["kept_shots"] = res.kept_shots;
    json counts;
    for (const auto& [key, n] : res.outcomes.counts) counts[key] = n;
    out["outcome_counts"] = counts;
    out["pairs"] = json::array();
    for (const PairMetrics& pm : res.pairs) {
      out["pairs"].push_back(pair_json(pm, "trajectory-mean"));
      rec->csv_rows.push_back(pm.label + "," + fmt(pm.F.value) + ",0," +
                              fmt(pm.S.value) + ",0," + fmt(pm.C) + "," +
                              std::to_string(cfg.seed));
    }
  }
}

void run_sweep_experiment(const ExperimentConfig& cfg, ResultRecord* rec) {
  const ProtocolInstance p = cfg.build_protocol();
  SweepOptions opt;
  opt.grid = linspace(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points);
  opt.mode = cfg.sweep.mode;
  opt.shots = cfg.shots;
  opt.repeats = cfg.sweep.repeats;
  opt.seed = cfg.seed;
  opt.noisy_measurement = cfg.noise.noisy_measurement;

  const SweepResult res = epsilon_sweep(p, opt);

  json& out = rec->json["result"];
  out["protocol"] = p.name;
  out["mode"] = opt.mode == SweepMode::Exact ? "exact" : "trajectories";
  out["smoothed"] = res.smoothed;
  out["pairs"] = json::array();
  for (std::size_t i = 0; i < res.pair_labels.size(); ++i) {
    json pj;
    pj["pair"] = res.pair_labels[i];
    if (res.epsilon_crit[i]) {
      pj["epsilon_crit"] = *res.epsilon_crit[i];
    } else {
      pj["epsilon_crit"] = nullptr;
    }
    out["pairs"].push_back(pj);
  }
  json points = json::array();
  for (const SweepPoint& pt : res.points) {
    json pj;
    pj["epsilon"] = pt.epsilon;
    pj["pairs"] = json::array();
    for (const PairMetrics& pm : pt.pairs) {
      pj["pairs"].push_back(pair_json(
          pm, opt.mode == SweepMode::Exact ? "exact" : "shot-sampled"));
    }
    points.push_back(pj);
  }
  out["points"] = points;

  rec->csv_header = "epsilon,pair,F,F_stderr,S,S_stderr,seed";
  for (const SweepPoint& pt : res.points) {
    for (const PairMetrics& pm : pt.pairs) {
      rec->csv_rows.push_back(fmt(pt.epsilon) + "," + pm.label + "," +
                              fmt(pm.F.value) + "," + fmt(pm.F.std_error) +
                              "," + fmt(pm.S.value) + "," +
                              fmt(pm.S.std_error) + "," +
                              std::to_string(cfg.seed));
    }
  }
}

void run_tomography_experiment(const ExperimentConfig& cfg, ResultRecord* rec) {
  const DensityMatrix truth =
      fixture_state(cfg.tomography.state, cfg.tomography.werner_f);
  json& out = rec->json["result"];
  out["state"] = cfg.tomography.state;
  rec->csv_header = "metric,value,seed";

  if (!cfg.tomography.sampled) {
    const TomographyEstimate est = tomography_exact(truth);
    const double td = trace_distance(est.rho, truth);
    const double f = fidelity(est.rho, truth);
    out["estimator"] = est.method;
    out["trace_distance"] = td;
    out["fidelity"] = f;
    rec->csv_rows.push_back("trace_distance," + fmt(td) + "," +
                            std::to_string(cfg.seed));
    rec->csv_rows.push_back("fidelity," + fmt(f) + "," +
                            std::to_string(cfg.seed));
    return;
  }

  double td_sum = 0.0, td_max = 0.0, td_sq = 0.0;
  int projected = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    CounterRng rnd = CounterRng::derive(cfg.seed, static_cast<std::uint64_t>(t));
    const auto counts = sample_tomography_counts(truth, cfg.shots, rnd);
    const TomographyEstimate est =
        tomography_from_counts(truth.num_qubits, counts);
    const double td = trace_distance(est.rho, truth);
    td_sum += td;
    td_sq += td * td;
    td_max = std::max(td_max, td);
    projected += est.projected ? 1 : 0;
  }
  const double n = cfg.trials;
  const double mean = td_sum / n;
  const double sd =
      cfg.trials > 1 ? std::sqrt((td_sq - n * mean * mean) / (n - 1)) : 0.0;
  out["estimator"] = "shot-sampled";
  out["shots_per_setting"] = cfg.shots;
  out["trials"] = cfg.trials;
  out["trace_distance_mean"] = mean;
  out["trace_distance_stderr"] = sd / std::sqrt(n);
  out["trace_distance_max"] = td_max;
  out["projected_trials"] = projected;
  rec->csv_rows.push_back("trace_distance_mean," + fmt(mean) + "," +
                          std::to_string(cfg.seed));
  rec->csv_rows.push_back("trace_distance_max," + fmt(td_max) + "," +
                          std::to_string(cfg.seed));
}

void run_chsh_experiment(const ExperimentConfig& cfg, ResultRecord* rec) {
  json& out = rec->json["result"];
  out["settings"] = "A=X A'=Z B=H B'=ZHZ";
  rec->csv_header = "state,F,S,S_stderr,seed";

  if (cfg.chsh.state == "werner-curve") {
    const auto fs = linspace(0.25, 1.0, cfg.chsh.curve_points);
    json points = json::array();
    for (double f : fs) {
      const DensityMatrix w = bell_frame(werner_state(f));
      const double s = chsh_s(w);
      json pj;
      pj["F"] = f;
      pj["S"] = s;
      pj["S_closed_form"] = werner_s(f);
      points.push_back(pj);
      rec->csv_rows.push_back("werner," + fmt(f) + "," + fmt(s) + ",0," +
                              std::to_string(cfg.seed));
    }
    out["estimator"] = "exact";
    out["points"] = points;
    out["fidelity_threshold"] = chsh_fidelity_threshold();
    return;
  }

  DensityMatrix rho = fixture_state(cfg.chsh.state, cfg.chsh.werner_f);
  const double f_g2 = cfg.chsh.state == "phi-plus"
                          ? fidelity(rho, phi_plus())
                          : fidelity(rho, g2_state());
  if (fixture_needs_bell_frame(cfg.chsh.state)) rho = bell_frame(rho);

  if (cfg.chsh.sampled) {
    CounterRng rnd = CounterRng::derive(cfg.seed, 0);
    const Estimate est =
        chsh_s_sampled(rho, ChshSettings::defaults(), cfg.shots, rnd);
    out["estimator"] = "shot-sampled";
    out["shots"] = cfg.shots;
    out["S"] = est.value;
    out["S_stderr"] = est.std_error;
    rec->csv_rows.push_back(cfg.chsh.state + "," + fmt(f_g2) + "," +
                            fmt(est.value) + "," + fmt(est.std_error) + "," +
                            std::to_string(cfg.seed));
  } else {
    const double s = chsh_s(rho);
    out["estimator"] = "exact";
    out["S"] = s;
    rec->csv_rows.push_back(cfg.chsh.state + "," + fmt(f_g2) + "," + fmt(s) +
                            ",0," + std::to_string(cfg.seed));
  }
}

}  // namespace

ResultRecord run(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultRecord rec;
  rec.json["experiment"] = experiment_kind_name(cfg.kind);
  rec.json["config"] = cfg.serialize();
  switch (cfg.kind) {
    case ExperimentConfig::Kind::Protocol:
      run_protocol_experiment(cfg, &rec);
      break;
    case ExperimentConfig::Kind::Sweep:
      run_sweep_experiment(cfg, &rec);
      break;
    case ExperimentConfig::Kind::Tomography:
      run_tomography_experiment(cfg, &rec);
      break;
    case ExperimentConfig::Kind::Chsh:
      run_chsh_experiment(cfg, &rec);
      break;
  }
  json prov;
  prov["seed"] = cfg.seed;
  prov["version"] = kVersion;
  rec.json["provenance"] = prov;
  return rec;
}

std::string render_csv(const ResultRecord& rec) {
  std::string out = rec.csv_header + "\n";
  for (const std::string& row : rec.csv_rows) out += row + "\n";
  return out;
}

void emit(const ResultRecord& rec, const ExperimentConfig& cfg) {
  if (!cfg.output_json.empty()) {
    std::ofstream out(cfg.output_json, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write to " + cfg.output_json);
    }
    out << rec.json.dump(2) << "\n";
  }
  if (!cfg.output_csv.empty()) {
    std::ofstream out(cfg.output_csv, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write to " + cfg.output_csv);
    }
    out << render_csv(rec);
  }
}

SweepCsv parse_sweep_csv(const std::string& text) {
  SweepCsv out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6) {
      throw std::invalid_argument("sweep csv row with too few columns: " + line);
    }
    const double eps = std::stod(cells[0]);
    const std::string& label = cells[1];
    const double s = std::stod(cells[4]);
    std::size_t idx = 0;
    for (; idx < out.pair_labels.size(); ++idx) {
      if (out.pair_labels[idx] == label) break;
    }
    if (idx == out.pair_labels.size()) {
      out.pair_labels.push_back(label);
      out.epsilon.emplace_back();
      out.s.emplace_back();
    }
    out.epsilon[idx].push_back(eps);
    out.s[idx].push_back(s);
  }
  return out;
}

}  // namespace qnet
