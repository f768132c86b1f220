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

#include "qnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnet {

bool DeviceTopology::coupled(int a, int b) const {
  if (a > b) std::swap(a, b);
  return edges.count({a, b}) > 0;
}

void DeviceTopology::add(int a, int b) {
  if (a == b) {
    throw std::invalid_argument("topology self-loop on qubit " +
                                std::to_string(a));
  }
  if (a < 0 || b < 0) {
    throw std::invalid_argument("topology edge with negative qubit index");
  }
  if (a > b) std::swap(a, b);
  edges.insert({a, b});
  num_qubits = std::max(num_qubits, b + 1);
}

DeviceTopology DeviceTopology::tokyo() {
  DeviceTopology t;
  t.name = "tokyo";
  t.num_qubits = 20;
  const std::pair<int, int> list[] = {
      {0, 1},  {0, 5},   {1, 6},   {5, 6},   {5, 10},  {5, 11},
      {6, 10}, {6, 11},  {10, 11}, {10, 15}, {11, 16}, {15, 16},
  };
  for (auto [a, b] : list) t.edges.insert({a, b});
  return t;
}

DeviceTopology DeviceTopology::line20() {
  DeviceTopology t;
  t.name = "line20";
  t.num_qubits = 20;
  for (int i = 0; i + 1 < 20; ++i) t.edges.insert({i, i + 1});
  return t;
}

const std::vector<std::string>& DeviceTopology::preset_names() {
  static const std::vector<std::string> names = {"tokyo", "line20"};
  return names;
}

bool DeviceTopology::is_preset(const std::string& name) {
  const auto& names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

DeviceTopology DeviceTopology::preset(const std::string& name) {
  if (name == "tokyo") return tokyo();
  if (name == "line20") return line20();
  throw std::invalid_argument("unknown topology preset: " + name);
}

DeviceTopology DeviceTopology::parse(const std::string& text,
                                     const std::string& origin) {
  DeviceTopology t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_name = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!have_name) {
      std::string tag, name;
      ls >> tag >> name;
      if (tag != "name" || name.empty()) {
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": expected 'name <identifier>' header");
      }
      t.name = name;
      have_name = true;
      continue;
    }
    int a, b;
    if (!(ls >> a >> b)) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'i j' edge line");
    }
    t.add(a, b);
  }
  if (!have_name) {
    throw std::invalid_argument(origin + ": missing 'name' header");
  }
  return t;
}

DeviceTopology DeviceTopology::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string DeviceTopology::to_text() const {
  std::ostringstream out;
  out << "name " << name << "\n";
  for (const auto& [a, b] : edges) out << a << " " << b << "\n";
  return out.str();
}

}  // namespace qnet
