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

#include "qnet/graph_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace qnet {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

using Mat = std::array<cplx, 4>;

Mat matmul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat dagger(const Mat& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

// Strip global phase: first entry of significant magnitude becomes positive
// real. All group elements have entries on a coarse lattice, so a fixed-point
// key is collision-free.
Mat canonicalize(Mat m) {
  for (const cplx& e : m) {
    if (std::abs(e) > 1e-8) {
      const cplx ph = e / std::abs(e);
      for (cplx& x : m) x /= ph;
      return m;
    }
  }
  throw std::logic_error("zero matrix");
}

std::array<std::int64_t, 8> key_of(const Mat& m) {
  std::array<std::int64_t, 8> k{};
  for (int i = 0; i < 4; ++i) {
    k[2 * i] = std::llround(m[i].real() * (1 << 20));
    k[2 * i + 1] = std::llround(m[i].imag() * (1 << 20));
  }
  return k;
}

const Mat kI{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
const Mat kH{cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0},
             cplx{-kInvSqrt2, 0}};
const Mat kS{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 1}};
const Mat kX{cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
const Mat kY{cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}};
const Mat kZ{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};
// sqrt(+iY) and sqrt(-iY): real rotations by -45 / +45 degrees.
const Mat kSqrtIY{cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0},
                  cplx{-kInvSqrt2, 0}, cplx{kInvSqrt2, 0}};
const Mat kSqrtMIY{cplx{kInvSqrt2, 0}, cplx{-kInvSqrt2, 0},
                   cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0}};

struct Tables {
  std::vector<Mat> mat;
  std::vector<std::string> word;
  std::map<std::array<std::int64_t, 8>, int> index;
  std::uint8_t mul[24][24];
  std::uint8_t adj[24];
  std::pair<std::uint8_t, std::int8_t> conj[24][4];  // [u][pauli]
  int id, h, s, sdg, x, y, z, sqrt_iy, sqrt_miy;

  int lookup(const Mat& m) const {
    auto it = index.find(key_of(canonicalize(m)));
    if (it == index.end()) throw std::logic_error("matrix not a 1q Clifford");
    return it->second;
  }

  Tables() {
    // BFS closure of {H, S}; the quotient by global phase has 24 elements.
    auto push = [&](const Mat& m, const std::string& w) {
      const Mat c = canonicalize(m);
      const auto k = key_of(c);
      if (index.count(k)) return false;
      index[k] = static_cast<int>(mat.size());
      mat.push_back(c);
      word.push_back(w);
      return true;
    };
    push(kI, "I");
    for (std::size_t i = 0; i < mat.size(); ++i) {
      const Mat cur = mat[i];
      const std::string w = word[i] == "I" ? "" : word[i];
      push(matmul(kH, cur), "H" + w);
      push(matmul(kS, cur), "S" + w);
    }
    if (mat.size() != 24) throw std::logic_error("clifford closure != 24");

    for (int a = 0; a < 24; ++a) {
      adj[a] = static_cast<std::uint8_t>(lookup(dagger(mat[a])));
      for (int b = 0; b < 24; ++b) {
        mul[a][b] = static_cast<std::uint8_t>(lookup(matmul(mat[a], mat[b])));
      }
    }

    const Mat paulis[4] = {kI, kX, kY, kZ};
    for (int a = 0; a < 24; ++a) {
      for (int p = 0; p < 4; ++p) {
        const Mat m = matmul(matmul(mat[a], paulis[p]), dagger(mat[a]));
        bool found = false;
        for (int q = 0; q < 4 && !found; ++q) {
          for (int sign = 0; sign < 2 && !found; ++sign) {
            bool eq = true;
            for (int e = 0; e < 4; ++e) {
              const cplx want = (sign ? -1.0 : 1.0) * paulis[q][e];
              if (std::abs(m[e] - want) > 1e-9) { eq = false; break; }
            }
            if (eq) {
              conj[a][p] = {static_cast<std::uint8_t>(q),
                            static_cast<std::int8_t>(sign ? -1 : 1)};
              found = true;
            }
          }
        }
        if (!found) throw std::logic_error("pauli conjugation failed");
      }
    }

    id = lookup(kI);
    h = lookup(kH);
    s = lookup(kS);
    sdg = lookup(dagger(kS));
    x = lookup(kX);
    y = lookup(kY);
    z = lookup(kZ);
    sqrt_iy = lookup(kSqrtIY);
    sqrt_miy = lookup(kSqrtMIY);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

// LocalClifford -------------------------------------------------------------

LocalClifford LocalClifford::identity() { return LocalClifford(tables().id); }
LocalClifford LocalClifford::h() { return LocalClifford(tables().h); }
LocalClifford LocalClifford::s() { return LocalClifford(tables().s); }
LocalClifford LocalClifford::sdg() { return LocalClifford(tables().sdg); }
LocalClifford LocalClifford::x() { return LocalClifford(tables().x); }
LocalClifford LocalClifford::y() { return LocalClifford(tables().y); }
LocalClifford LocalClifford::z() { return LocalClifford(tables().z); }
LocalClifford LocalClifford::sqrt_iy() {
  return LocalClifford(tables().sqrt_iy);
}
LocalClifford LocalClifford::sqrt_miy() {
  return LocalClifford(tables().sqrt_miy);
}

LocalClifford LocalClifford::from_matrix(const std::array<cplx, 4>& m) {
  return LocalClifford(tables().lookup(m));
}

LocalClifford LocalClifford::operator*(const LocalClifford& rhs) const {
  return LocalClifford(tables().mul[idx_][rhs.idx_]);
}

LocalClifford LocalClifford::adjoint() const {
  return LocalClifford(tables().adj[idx_]);
}

std::pair<Pauli, int> LocalClifford::conjugate_pauli(Pauli p) const {
  const auto [q, sign] = tables().conj[idx_][static_cast<int>(p)];
  return {static_cast<Pauli>(q), sign};
}

const std::array<cplx, 4>& LocalClifford::matrix() const {
  return tables().mat[idx_];
}

bool LocalClifford::is_pauli() const {
  const Tables& t = tables();
  return idx_ == t.id || idx_ == t.x || idx_ == t.y || idx_ == t.z;
}

const std::string& LocalClifford::word() const { return tables().word[idx_]; }

// GraphState ------------------------------------------------------------------

GraphState::GraphState(int n)
    : adj_(n), frame_(n, LocalClifford::identity()), present_(n, true) {
  if (n < 1) throw std::invalid_argument("graph state needs >= 1 vertex");
}

GraphState GraphState::from_edges(
    int n, const std::vector<std::pair<int, int>>& edges) {
  GraphState g(n);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

void GraphState::check_present(int v, const char* what) const {
  if (v < 0 || v >= universe_size() || !present_[v]) {
    throw std::invalid_argument(std::string(what) + ": vertex " +
                                std::to_string(v) + " is absent");
  }
}

bool GraphState::present(int v) const {
  return v >= 0 && v < universe_size() && present_[v];
}

std::vector<int> GraphState::vertices() const {
  std::vector<int> out;
  for (int v = 0; v < universe_size(); ++v) {
    if (present_[v]) out.push_back(v);
  }
  return out;
}

int GraphState::num_present() const {
  return static_cast<int>(std::count(present_.begin(), present_.end(), true));
}

const std::set<int>& GraphState::neighbors(int v) const {
  check_present(v, "neighbors");
  return adj_[v];
}

bool GraphState::has_edge(int u, int v) const {
  return present(u) && present(v) && adj_[u].count(v) > 0;
}

std::vector<std::pair<int, int>> GraphState::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < universe_size(); ++v) {
    if (!present_[v]) continue;
    for (int u : adj_[v]) {
      if (u > v) out.emplace_back(v, u);
    }
  }
  return out;
}

LocalClifford GraphState::frame(int v) const {
  check_present(v, "frame");
  return frame_[v];
}

void GraphState::set_frame(int v, LocalClifford f) {
  check_present(v, "set_frame");
  frame_[v] = f;
}

void GraphState::add_edge(int u, int v) {
  check_present(u, "add_edge");
  check_present(v, "add_edge");
  if (u == v) {
    throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  }
  adj_[u].insert(v);
  adj_[v].insert(u);
}

void GraphState::toggle_edge(int u, int v) {
  if (adj_[u].erase(v)) {
    adj_[v].erase(u);
  } else {
    add_edge(u, v);
  }
}

void GraphState::local_complement(int v) {
  check_present(v, "local_complement");
  const std::set<int> nbrs = adj_[v];
  for (auto i = nbrs.begin(); i != nbrs.end(); ++i) {
    for (auto j = std::next(i); j != nbrs.end(); ++j) {
      toggle_edge(*i, *j);
    }
  }
}

void GraphState::compose_frame(int v, LocalClifford correction) {
  // State is frame[v] applied to the bare graph; a byproduct C acting on the
  // bare side composes on the right.
  frame_[v] = frame_[v] * correction;
}

void GraphState::remove_vertex(int v) {
  const std::set<int> nbrs = adj_[v];
  for (int u : nbrs) {
    adj_[u].erase(v);
  }
  adj_[v].clear();
  frame_[v] = LocalClifford::identity();
  present_[v] = false;
}

GraphState::BareDispatch GraphState::dispatch(int v, Basis basis,
                                              int outcome) const {
  Pauli observable = Pauli::X;
  if (basis == Basis::Y) observable = Pauli::Y;
  if (basis == Basis::Z) observable = Pauli::Z;
  // Measuring P on U|G> is measuring U^dagger P U on |G>.
  const auto [eff, sign] = frame_[v].adjoint().conjugate_pauli(observable);
  return {eff, sign < 0 ? (outcome ^ 1) : outcome};
}

int GraphState::determined_outcome(int v, Basis basis) const {
  check_present(v, "determined_outcome");
  const BareDispatch d = dispatch(v, basis, 0);
  if (d.effective == Pauli::X && adj_[v].empty()) {
    // Bare |+> is an X eigenstate with eigenvalue +1.
    return d.outcome == 0 ? 0 : 1;  // user outcome that maps to bare 0
  }
  return -1;
}

void GraphState::measure_vertex(int v, Basis basis, int outcome) {
  check_present(v, "measure_vertex");
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("outcome must be 0 or 1");
  }
  const BareDispatch d = dispatch(v, basis, outcome);
  switch (d.effective) {
    case Pauli::Z: bare_measure_z(v, d.outcome); break;
    case Pauli::Y: bare_measure_y(v, d.outcome); break;
    case Pauli::X: bare_measure_x(v, d.outcome); break;
    case Pauli::I: throw std::logic_error("identity observable");
  }
}

void GraphState::bare_measure_z(int v, int outcome) {
  const std::set<int> nbrs = adj_[v];
  if (outcome == 1) {
    for (int u : nbrs) compose_frame(u, LocalClifford::z());
  }
  remove_vertex(v);
}

void GraphState::bare_measure_y(int v, int outcome) {
  // Byproduct sqrt(-+ iZ) on each neighbor, i.e. S for outcome +1 and Sdg for
  // outcome -1; graph gets a local complementation about v.
  const std::set<int> nbrs = adj_[v];
  const LocalClifford c =
      outcome == 0 ? LocalClifford::s() : LocalClifford::sdg();
  for (int u : nbrs) compose_frame(u, c);
  local_complement(v);
  remove_vertex(v);
}

void GraphState::bare_measure_x(int v, int outcome) {
  if (adj_[v].empty()) {
    if (outcome == 1) {
      throw std::invalid_argument(
          "forced X outcome has zero probability on isolated vertex");
    }
    remove_vertex(v);
    return;
  }
  const int w = *adj_[v].begin();  // designated neighbor: lowest index
  const std::set<int> vn = adj_[v];
  const std::set<int> wn = adj_[w];

  if (outcome == 0) {
    compose_frame(w, LocalClifford::sqrt_iy());
    for (int u : vn) {
      if (u != w && wn.count(u) == 0) compose_frame(u, LocalClifford::z());
    }
  } else {
    compose_frame(w, LocalClifford::sqrt_miy());
    for (int u : wn) {
      if (u != v && vn.count(u) == 0) compose_frame(u, LocalClifford::z());
    }
  }

  // Graph rewrite in three toggle passes (tau_w tau_v tau_w combined).
  std::set<std::pair<int, int>> done;
  auto toggle_once = [&](int a, int b) {
    if (a == b) return;
    const auto e = std::minmax(a, b);
    if (done.insert({e.first, e.second}).second) toggle_edge(a, b);
  };
  for (int a : vn) {
    for (int b : wn) toggle_once(a, b);
  }
  done.clear();
  std::vector<int> isc;
  std::set_intersection(vn.begin(), vn.end(), wn.begin(), wn.end(),
                        std::back_inserter(isc));
  for (std::size_t i = 0; i < isc.size(); ++i) {
    for (std::size_t j = i + 1; j < isc.size(); ++j) {
      toggle_edge(isc[i], isc[j]);
    }
  }
  for (int u : vn) {
    if (u != w) toggle_edge(w, u);
  }

  if (!adj_[v].empty()) throw std::logic_error("X rewrite left vertex coupled");
  remove_vertex(v);
}

PureState GraphState::to_statevector() const {
  const std::vector<int> verts = vertices();
  const int k = static_cast<int>(verts.size());
  if (k == 0) throw std::invalid_argument("no vertices left");
  if (k > kMaxPureQubits) {
    throw std::invalid_argument("graph too wide for a state vector");
  }
  std::vector<int> pos(universe_size(), -1);
  for (int i = 0; i < k; ++i) pos[verts[i]] = i;

  PureState st = PureState::plus(k);
  for (int v : verts) {
    for (int u : adj_[v]) {
      if (u > v) apply(st, Gate::cz(pos[v], pos[u]));
    }
  }
  for (int v : verts) {
    if (!frame_[v].is_identity()) {
      apply_matrix1(st, pos[v], frame_[v].matrix().data());
    }
  }
  return st;
}

std::vector<PauliString> GraphState::stabilizers() const {
  const std::vector<int> verts = vertices();
  const int k = static_cast<int>(verts.size());
  std::vector<int> pos(universe_size(), -1);
  for (int i = 0; i < k; ++i) pos[verts[i]] = i;

  std::vector<PauliString> rows;
  rows.reserve(k);
  for (int v : verts) {
    PauliString p = PauliString::identity(k);
    p.letters[pos[v]] = Pauli::X;
    for (int u : adj_[v]) p.letters[pos[u]] = Pauli::Z;
    // Conjugate every site by its frame: (tensor U) K (tensor U)^dagger.
    int sign = 1;
    for (int i = 0; i < k; ++i) {
      const auto [q, s] = frame_[verts[i]].conjugate_pauli(p.letters[i]);
      p.letters[i] = q;
      sign *= s;
    }
    p.phase = cplx{static_cast<double>(sign), 0};
    rows.push_back(std::move(p));
  }
  return rows;
}

}  // namespace qnet
