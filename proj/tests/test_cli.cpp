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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qnet/config.hpp"
#include "qnet/runner.hpp"

using namespace qnet;

namespace {

struct CmdResult {
  int status;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QNET_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string temp_dir() {
  static int counter = 0;
  std::string dir = "qnet_cli_test_" + std::to_string(++counter);
  REQUIRE(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0);
  return dir;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSweepConfig = R"(# sweep manifest
[experiment]
kind = sweep
seed = 7
shots = 256
output_csv = {DIR}/sweep.csv
output_json = {DIR}/sweep.json

[protocol]
kind = mqnc-step2
topology = tokyo

[sweep]
epsilon_start = 0.0
epsilon_stop = 0.05
points = 6
mode = exact
)";

std::string write_config(const std::string& dir, std::string text) {
  std::string::size_type pos;
  while ((pos = text.find("{DIR}")) != std::string::npos) {
    text.replace(pos, 5, dir);
  }
  const std::string path = dir + "/config.ini";
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("config parse, serialize, and round trip") {
  const ExperimentConfig cfg = ExperimentConfig::parse(
      "[experiment]\nkind = sweep\nseed = 9\n\n[protocol]\nkind = "
      "swapping\nembedding = 0,5,6,11\n\n[sweep]\npoints = 3\n");
  CHECK(cfg.kind == ExperimentConfig::Kind::Sweep);
  CHECK(cfg.seed == 9);
  CHECK(cfg.protocol.kind == ProtocolKind::Swapping);
  CHECK(cfg.protocol.embedding == std::vector<int>{0, 5, 6, 11});

  // serialize -> parse is semantically identical.
  const ExperimentConfig back = ExperimentConfig::parse(cfg.serialize());
  CHECK(back.serialize() == cfg.serialize());

  CHECK_THROWS_WITH_AS(
      ExperimentConfig::parse("[experiment]\nkind = bogus\n"),
      doctest::Contains("unknown experiment kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[typo]\nx = 1\n"),
                       doctest::Contains("unknown config section"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      ExperimentConfig::parse("[experiment]\nshots = -3\n"),
      doctest::Contains("shots"), std::invalid_argument);
}

TEST_CASE("config validation catches semantic errors") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentConfig::Kind::Protocol;
  cfg.protocol.kind = ProtocolKind::Swapping;
  cfg.protocol.embedding = {0, 5, 6, 12};  // 6-12 not coupled on tokyo
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg.protocol.embedding = {0, 5, 6, 11};
  CHECK_NOTHROW(cfg.validate());

  cfg.protocol.pattern = "0";  // swapping measures two qubits
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("cli: validate-config and error exit codes") {
  const std::string dir = temp_dir();
  const std::string path = write_config(dir, kSweepConfig);
  const CmdResult ok = run_cli("validate-config -c " + path);
  CHECK(ok.status == 0);
  CHECK(ok.out.find("kind = sweep") != std::string::npos);

  const CmdResult bad =
      run_cli("validate-config -c " + path + " --set protocol.kind=bogus");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("unknown protocol kind") != std::string::npos);

  const CmdResult missing = run_cli("validate-config -c " + dir + "/nope.ini");
  CHECK(missing.status == 1);

  CHECK(std::system(("rm -rf " + dir).c_str()) == 0);
}

TEST_CASE("cli: run-sweep determinism and csv round trip") {
  const std::string dir = temp_dir();
  const std::string path = write_config(dir, kSweepConfig);

  const CmdResult first = run_cli("run-sweep -c " + path);
  REQUIRE(first.status == 0);
  const std::string csv1 = read_file(dir + "/sweep.csv");
  const std::string json1 = read_file(dir + "/sweep.json");

  const CmdResult second = run_cli("run-sweep -c " + path);
  REQUIRE(second.status == 0);
  CHECK(read_file(dir + "/sweep.csv") == csv1);   // identical bytes
  CHECK(read_file(dir + "/sweep.json") == json1);

  // CSV header and shape: 6 points x 2 pairs.
  std::istringstream in(csv1);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epsilon,pair,F,F_stderr,S,S_stderr,seed");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 12);

  // Re-ingesting the CSV reproduces the in-memory epsilon_crit.
  const SweepCsv parsed = parse_sweep_csv(csv1);
  REQUIRE(parsed.pair_labels.size() == 2);
  ExperimentConfig cfg = ExperimentConfig::load(path);
  const ResultRecord rec = run(cfg);
  for (std::size_t i = 0; i < parsed.pair_labels.size(); ++i) {
    const auto crit = epsilon_crit(parsed.epsilon[i], parsed.s[i], nullptr);
    const auto& pj = rec.json["result"]["pairs"][i];
    if (pj["epsilon_crit"].is_null()) {
      CHECK(!crit.has_value());
    } else {
      REQUIRE(crit.has_value());
      CHECK(*crit ==
            doctest::Approx(pj["epsilon_crit"].get<double>()).epsilon(1e-9));
    }
  }

  CHECK(std::system(("rm -rf " + dir).c_str()) == 0);
}

TEST_CASE("empty sweep record renders a header-only csv") {
  ResultRecord rec;
  rec.csv_header = "epsilon,pair,F,F_stderr,S,S_stderr,seed";
  CHECK(render_csv(rec) == "epsilon,pair,F,F_stderr,S,S_stderr,seed\n");
}

TEST_CASE("cli: run-protocol and fixtures") {
  const CmdResult res = run_cli(
      "run-protocol --set protocol.kind=mqnc-step2 --set noise.epsilon=0");
  REQUIRE(res.status == 0);
  CHECK(res.out.find("\"target_fidelity\": 1.0") != std::string::npos);

  const CmdResult chsh = run_cli("run-chsh --set chsh.state=phi-plus");
  REQUIRE(chsh.status == 0);
  CHECK(chsh.out.find("2.828427124746") != std::string::npos);

  const CmdResult topo = run_cli("list-topologies");
  REQUIRE(topo.status == 0);
  CHECK(topo.out.find("tokyo") != std::string::npos);
}

TEST_CASE("shipped configs parse and validate") {
  const std::string base = std::string(QNET_SOURCE_DIR) + "/configs/";
  for (const char* name :
       {"mqnc_noiseless.ini", "mqnc_sweep.ini", "mqnc_sweep_sampled.ini",
        "swapping.ini", "linear_mbqc.ini", "mqnc_full.ini",
        "chsh_werner_curve.ini", "tomography_bell.ini"}) {
    CAPTURE(name);
    const ExperimentConfig cfg = ExperimentConfig::load(base + name);
    CHECK_NOTHROW(cfg.validate());
  }
}

TEST_CASE("full tokyo topology file hosts the protocol embeddings") {
  const DeviceTopology full = DeviceTopology::from_file(
      std::string(QNET_SOURCE_DIR) + "/data/tokyo_full.topo");
  CHECK(full.name == "tokyo-full");
  CHECK(full.num_qubits == 20);
  CHECK_NOTHROW(build_mqnc(MqncStage::Step2Onward, {0, 10, 5, 6, 11, 1},
                           &full));
  CHECK_NOTHROW(build_swapping({1, 6, 5, 10}, &full));
  CHECK_NOTHROW(build_linear_mbqc(5, {0, 5, 10, 15, 16}, &full));
  // The preset is the restriction of the full map to its qubit set.
  const DeviceTopology preset = DeviceTopology::tokyo();
  for (const auto& [a, b] : preset.edges) {
    CHECK(full.coupled(a, b));
  }
}

TEST_CASE("cli: run-tomography sampled mode") {
  const CmdResult res = run_cli(
      "run-tomography --set tomography.state=phi-plus --set "
      "tomography.mode=sampled --shots 1024 --set experiment.trials=2");
  REQUIRE(res.status == 0);
  CHECK(res.out.find("trace_distance_mean") != std::string::npos);
}

TEST_CASE("cli: sweep json reports epsilon_crit sensitivity inputs") {
  // noisy_measurement flag routes into the sweep and shifts insertions.
  ExperimentConfig cfg;
  cfg.kind = ExperimentConfig::Kind::Sweep;
  cfg.protocol.kind = ProtocolKind::MqncStep2Onward;
  cfg.sweep.points = 6;
  cfg.sweep.stop = 0.05;
  cfg.noise.noisy_measurement = true;
  const ResultRecord rec = run(cfg);
  CHECK(rec.json["result"]["pairs"][0]["epsilon_crit"].is_number());
}
