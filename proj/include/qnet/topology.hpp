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

#ifndef QNET_TOPOLOGY_HPP
#define QNET_TOPOLOGY_HPP

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qnet {

/// Device coupling map: the qubit pairs that support native 2-qubit gates.
struct DeviceTopology {
  std::string name;
  int num_qubits = 0;
  std::set<std::pair<int, int>> edges;  // normalized first < second

  bool coupled(int a, int b) const;
  void add(int a, int b);

  /// The ibmq-tokyo coupling subgraph over qubits {0,1,5,6,10,11,15,16};
  /// wider maps load from a file.
  static DeviceTopology tokyo();
  /// 20-qubit open chain 0-1-...-19, for simulation-only studies.
  static DeviceTopology line20();

  static const std::vector<std::string>& preset_names();
  static bool is_preset(const std::string& name);
  static DeviceTopology preset(const std::string& name);

  /// Text format: optional '#' comment lines, a "name <identifier>" header,
  /// then one "i j" pair per line. Width is max index + 1.
  static DeviceTopology from_file(const std::string& path);
  static DeviceTopology parse(const std::string& text,
                              const std::string& origin = "<string>");
  std::string to_text() const;
};

}  // namespace qnet

#endif
