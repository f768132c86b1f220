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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnet/config.hpp"
#include "qnet/kernels.hpp"
#include "qnet/runner.hpp"
#include "qnet/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::string output_json;
  std::string output_csv;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", args->config_path,
                              "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--set", args->overrides,
                  "override a config field as section.key=value");
  cmd->add_option("--seed", args->seed, "override experiment.seed");
  cmd->add_option("--shots", args->shots, "override experiment.shots");
  cmd->add_option("--output-json", args->output_json,
                  "override experiment.output_json");
  cmd->add_option("--output-csv", args->output_csv,
                  "override experiment.output_csv");
}

qnet::ExperimentConfig make_config(const CommonArgs& args,
                                   const char* forced_kind) {
  qnet::ExperimentConfig cfg;
  if (!args.config_path.empty()) {
    cfg = qnet::ExperimentConfig::load(args.config_path);
  }
  if (forced_kind) cfg.set("experiment.kind", forced_kind);
  for (const std::string& ov : args.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects section.key=value, got '" +
                                  ov + "'");
    }
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (args.seed) cfg.seed = *args.seed;
  if (args.shots) cfg.shots = *args.shots;
  if (!args.output_json.empty()) cfg.output_json = args.output_json;
  if (!args.output_csv.empty()) cfg.output_csv = args.output_csv;
  return cfg;
}

int run_kind(const CommonArgs& args, const char* kind) {
  const qnet::ExperimentConfig cfg = make_config(args, kind);
  const qnet::ResultRecord rec = qnet::run(cfg);
  qnet::emit(rec, cfg);
  std::cout << rec.json.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnetsim: entanglement-distribution protocol simulator"};
  app.set_version_flag("--version", qnet::kVersion);
  app.require_subcommand(1);

  CommonArgs protocol_args, sweep_args, tomo_args, chsh_args, validate_args;

  auto* cmd_protocol = app.add_subcommand(
      "run-protocol", "run one protocol and report pair metrics");
  add_common(cmd_protocol, &protocol_args, false);

  auto* cmd_sweep = app.add_subcommand(
      "run-sweep", "sweep the depolarizing rate and extract epsilon_crit");
  add_common(cmd_sweep, &sweep_args, false);

  auto* cmd_tomo = app.add_subcommand(
      "run-tomography", "reconstruct a fixture state by tomography");
  add_common(cmd_tomo, &tomo_args, false);

  auto* cmd_chsh =
      app.add_subcommand("run-chsh", "CHSH S-values on fixture states");
  add_common(cmd_chsh, &chsh_args, false);

  auto* cmd_validate = app.add_subcommand(
      "validate-config", "parse and validate a config, print normal form");
  add_common(cmd_validate, &validate_args, true);

  auto* cmd_topologies =
      app.add_subcommand("list-topologies", "list built-in coupling maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_protocol->parsed()) return run_kind(protocol_args, "protocol");
    if (cmd_sweep->parsed()) return run_kind(sweep_args, "sweep");
    if (cmd_tomo->parsed()) return run_kind(tomo_args, "tomography");
    if (cmd_chsh->parsed()) return run_kind(chsh_args, "chsh");
    if (cmd_validate->parsed()) {
      const qnet::ExperimentConfig cfg = make_config(validate_args, nullptr);
      cfg.validate();
      std::cout << cfg.serialize();
      return 0;
    }
    if (cmd_topologies->parsed()) {
      for (const std::string& name : qnet::DeviceTopology::preset_names()) {
        const qnet::DeviceTopology t = qnet::DeviceTopology::preset(name);
        std::cout << name << ": " << t.num_qubits << " qubits, "
                  << t.edges.size() << " couplings\n";
      }
      std::cout << "file format: '# comment' lines, 'name <id>' header, "
                   "then one 'i j' edge per line\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
