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

#include "qnet/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qnet/kernels.hpp"
#include "qnet/rng.hpp"

namespace qnet {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kPsdTol = 1e-8;

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const DensityMatrix& rho) {
  return Eigen::Map<const EMat>(rho.data.data(),
                                static_cast<Eigen::Index>(rho.dim()),
                                static_cast<Eigen::Index>(rho.dim()));
}

DensityMatrix from_eigen(const EMat& m, int nq) {
  DensityMatrix rho = DensityMatrix::zeros_state(nq);
  Eigen::Map<EMat>(rho.data.data(), m.rows(), m.cols()) = m;
  return rho;
}

// sqrt() turns O(1e-16) eigenvalue noise around zero into O(1e-8) output;
// clip anything below a relative floor before taking roots.
void clip_tiny_eigenvalues(Eigen::VectorXd& ev) {
  const double floor = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < floor) ev[i] = 0.0;
  }
}

// Hermitian square root with small negative eigenvalues clipped to zero.
EMat sqrt_psd(const EMat& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<EMat> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -kPsdTol) {
      throw std::invalid_argument(std::string(what) +
                                  ": state is not positive semidefinite");
    }
  }
  clip_tiny_eigenvalues(ev);
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(ev[i]);
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

void check_same_width(const DensityMatrix& a, const DensityMatrix& b,
                      const char* what) {
  if (a.num_qubits != b.num_qubits) {
    throw std::invalid_argument(std::string(what) + ": width mismatch");
  }
}

// Entry (r, c) of a k-qubit Pauli tensor product.
cplx pauli_entry(const std::vector<Pauli>& letters, std::size_t r,
                 std::size_t c) {
  static const cplx mats[4][2][2] = {
      {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}},    // I
      {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}},    // X
      {{{0, 0}, {0, -1}}, {{0, 1}, {0, 0}}},   // Y
      {{{1, 0}, {0, 0}}, {{0, 0}, {-1, 0}}},   // Z
  };
  cplx out{1, 0};
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const int rq = static_cast<int>((r >> q) & 1);
    const int cq = static_cast<int>((c >> q) & 1);
    out *= mats[static_cast<int>(letters[q])][rq][cq];
    if (out == cplx{0, 0}) return out;
  }
  return out;
}

}  // namespace

// -- state metrics ------------------------------------------------------------

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_width(rho, sigma, "fidelity");
  const EMat sr = sqrt_psd(to_eigen(rho), "fidelity");
  const EMat inner_m = sr * to_eigen(sigma) * sr;
  Eigen::SelfAdjointEigenSolver<EMat> es(inner_m);
  Eigen::VectorXd ev = es.eigenvalues();
  clip_tiny_eigenvalues(ev);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::sqrt(ev[i]);
  return std::min(1.0, acc * acc);
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.num_qubits != psi.num_qubits) {
    throw std::invalid_argument("fidelity: width mismatch");
  }
  // <psi| rho |psi>
  cplx acc{0, 0};
  const std::size_t d = rho.dim();
  for (std::size_t c = 0; c < d; ++c) {
    cplx col{0, 0};
    for (std::size_t r = 0; r < d; ++r) {
      col += std::conj(psi.amp[r]) * rho.at(r, c);
    }
    acc += col * psi.amp[c];
  }
  return std::clamp(acc.real(), 0.0, 1.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  check_same_width(a, b, "trace_distance");
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(a) - to_eigen(b));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double concurrence(const DensityMatrix& rho) {
  if (rho.num_qubits != 2) {
    throw std::invalid_argument("concurrence needs a 2-qubit state");
  }
  const EMat m = to_eigen(rho);
  EMat yy = EMat::Zero(4, 4);
  const std::vector<Pauli> yyp = {Pauli::Y, Pauli::Y};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      yy(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          pauli_entry(yyp, r, c);
    }
  }
  const EMat spin_flipped = yy * m.conjugate() * yy;
  const EMat sr = sqrt_psd(m, "concurrence");
  // Spectrum of R = sqrt(sqrt(rho) rho~ sqrt(rho)); Hermitian PSD route.
  Eigen::SelfAdjointEigenSolver<EMat> es(sr * spin_flipped * sr);
  Eigen::VectorXd ev = es.eigenvalues();
  clip_tiny_eigenvalues(ev);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    lam[static_cast<std::size_t>(i)] = std::sqrt(ev[i]);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// -- Werner model ---------------------------------------------------------------

DensityMatrix werner_state(double F) {
  if (!(F >= 0.25 - 1e-12 && F <= 1.0 + 1e-12)) {
    throw std::invalid_argument("werner_state: F must lie in [1/4, 1]");
  }
  F = std::clamp(F, 0.25, 1.0);
  DensityMatrix rho = DensityMatrix::from_pure(g2_state());
  const double a = (4.0 * F - 1.0) / 3.0;
  const double b = (1.0 - F) / 3.0;
  kernels::active().scale(rho.data.data(), rho.data.size(), cplx{a, 0});
  for (std::size_t r = 0; r < 4; ++r) rho.at(r, r) += b;
  return rho;
}

double werner_s(double F) {
  if (!(F >= 0.25 - 1e-12 && F <= 1.0 + 1e-12)) {
    throw std::invalid_argument("werner_s: F must lie in [1/4, 1]");
  }
  return 2.0 * kSqrt2 * (4.0 * F - 1.0) / 3.0;
}

double chsh_fidelity_threshold() { return (1.0 + 3.0 / kSqrt2) / 4.0; }

// -- CHSH -------------------------------------------------------------------------

ChshSettings ChshSettings::defaults() {
  constexpr double r = 0.70710678118654752440;
  ChshSettings s;
  s.a = {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};    // X
  s.ap = {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};  // Z
  s.b = {cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}};   // H
  s.bp = {cplx{r, 0}, cplx{-r, 0}, cplx{-r, 0}, cplx{-r, 0}};  // ZHZ
  return s;
}

namespace {

void check_pm1_observable(const std::array<cplx, 4>& m, const char* which) {
  // Hermitian with eigenvalues +-1 <=> M = M^dagger, tr M = 0, M^2 = I.
  if (std::abs(m[0].imag()) > 1e-9 || std::abs(m[3].imag()) > 1e-9 ||
      std::abs(m[1] - std::conj(m[2])) > 1e-9) {
    throw std::invalid_argument(std::string("chsh observable ") + which +
                                " is not Hermitian");
  }
  if (std::abs(m[0] + m[3]) > 1e-9) {
    throw std::invalid_argument(std::string("chsh observable ") + which +
                                " is not traceless");
  }
  const cplx sq0 = m[0] * m[0] + m[1] * m[2];
  const cplx sq3 = m[2] * m[1] + m[3] * m[3];
  if (std::abs(sq0 - cplx{1, 0}) > 1e-9 || std::abs(sq3 - cplx{1, 0}) > 1e-9) {
    throw std::invalid_argument(std::string("chsh observable ") + which +
                                " does not square to identity");
  }
}

// <(P on qubit 0) x (Q on qubit 1)> for a 2-qubit state.
double pair_term(const DensityMatrix& rho, const std::array<cplx, 4>& p,
                 const std::array<cplx, 4>& q) {
  std::vector<cplx> obs(16);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      obs[r * 4 + c] = p[(r & 1) * 2 + (c & 1)] * q[(r >> 1) * 2 + (c >> 1)];
    }
  }
  return expectation(rho, obs);
}

std::array<double, 3> bloch_coeffs(const std::array<cplx, 4>& m) {
  // m = x X + y Y + z Z for a traceless Hermitian matrix.
  return {m[1].real(), -m[1].imag(), m[0].real()};
}

}  // namespace

void ChshSettings::validate() const {
  check_pm1_observable(a, "A");
  check_pm1_observable(ap, "A'");
  check_pm1_observable(b, "B");
  check_pm1_observable(bp, "B'");
}

double chsh_s(const DensityMatrix& rho, const ChshSettings& settings) {
  if (rho.num_qubits != 2) {
    throw std::invalid_argument("chsh_s needs a 2-qubit state");
  }
  settings.validate();
  return pair_term(rho, settings.a, settings.b) -
         pair_term(rho, settings.a, settings.bp) +
         pair_term(rho, settings.ap, settings.b) +
         pair_term(rho, settings.ap, settings.bp);
}

double chsh_s(const DensityMatrix& rho) {
  return chsh_s(rho, ChshSettings::defaults());
}

Estimate chsh_s_sampled(const DensityMatrix& rho, const ChshSettings& settings,
                        std::size_t shots, RandomSource& rnd) {
  if (rho.num_qubits != 2) {
    throw std::invalid_argument("chsh_s_sampled needs a 2-qubit state");
  }
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  settings.validate();
  const auto a = bloch_coeffs(settings.a);
  const auto ap = bloch_coeffs(settings.ap);
  const auto b = bloch_coeffs(settings.b);
  const auto bp = bloch_coeffs(settings.bp);
  double coef[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      coef[i][j] = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] -
                   a[static_cast<std::size_t>(i)] * bp[static_cast<std::size_t>(j)] +
                   ap[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] +
                   ap[static_cast<std::size_t>(i)] * bp[static_cast<std::size_t>(j)];
    }
  }

  const Basis axes[3] = {Basis::X, Basis::Y, Basis::Z};
  double s = 0.0;
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(coef[i][j]) < 1e-12) continue;
      DensityMatrix rotated = rho;
      if (axes[i] == Basis::X) apply(rotated, Gate::h(0));
      if (axes[i] == Basis::Y) {
        apply(rotated, Gate::sdg(0));
        apply(rotated, Gate::h(0));
      }
      if (axes[j] == Basis::X) apply(rotated, Gate::h(1));
      if (axes[j] == Basis::Y) {
        apply(rotated, Gate::sdg(1));
        apply(rotated, Gate::h(1));
      }
      const CountsTable counts = sample_counts(rotated, shots, rnd);
      double mean = 0.0;
      for (const auto& [key, n] : counts.counts) {
        const int sign = ((key[0] == '1') ^ (key[1] == '1')) ? -1 : 1;
        mean += sign * static_cast<double>(n);
      }
      mean /= static_cast<double>(shots);
      const double v =
          std::max(0.0, 1.0 - mean * mean) / static_cast<double>(shots);
      s += coef[i][j] * mean;
      var += coef[i][j] * coef[i][j] * v;
    }
  }
  return {s, std::sqrt(var)};
}

DensityMatrix bell_frame(const DensityMatrix& pair) {
  if (pair.num_qubits != 2) {
    throw std::invalid_argument("bell_frame needs a 2-qubit state");
  }
  DensityMatrix out = pair;
  apply(out, Gate::h(1));
  return out;
}

// -- tomography --------------------------------------------------------------------

std::vector<PauliSetting> all_settings(int k) {
  std::vector<PauliSetting> out;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    PauliSetting s(static_cast<std::size_t>(k));
    std::size_t rest = idx;
    for (int q = 0; q < k; ++q) {
      s[static_cast<std::size_t>(q)] = static_cast<Basis>(rest % 3);
      rest /= 3;
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::vector<double> diagonal_probs(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  double total = 0.0;
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    p[r] = std::max(0.0, rho.at(r, r).real());
    total += p[r];
  }
  for (double& x : p) x /= total;
  return p;
}

CountsTable sample_from_probs(const std::vector<double>& probs, int k,
                              std::size_t shots, RandomSource& rnd) {
  CountsTable table;
  for (std::size_t s = 0; s < shots; ++s) {
    const double r = rnd.next_double();
    double cum = 0.0;
    std::size_t pick = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      cum += probs[i];
      if (r < cum) {
        pick = i;
        break;
      }
    }
    std::string key(static_cast<std::size_t>(k), '0');
    for (int q = 0; q < k; ++q) {
      if (pick & (std::size_t{1} << q)) key[static_cast<std::size_t>(q)] = '1';
    }
    table.add(key);
  }
  return table;
}

void rotate_setting(DensityMatrix& rho, const PauliSetting& setting) {
  for (std::size_t q = 0; q < setting.size(); ++q) {
    if (setting[q] == Basis::X) {
      apply(rho, Gate::h(static_cast<int>(q)));
    } else if (setting[q] == Basis::Y) {
      apply(rho, Gate::sdg(static_cast<int>(q)));
      apply(rho, Gate::h(static_cast<int>(q)));
    }
  }
}

}  // namespace

CountsTable sample_counts(const DensityMatrix& rho, std::size_t shots,
                          RandomSource& rnd) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  return sample_from_probs(diagonal_probs(rho), rho.num_qubits, shots, rnd);
}

CountsTable sample_counts(const PureState& psi, std::size_t shots,
                          RandomSource& rnd) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) p[i] = std::norm(psi.amp[i]);
  return sample_from_probs(p, psi.num_qubits, shots, rnd);
}

TomographyEstimate tomography_exact(const DensityMatrix& rho) {
  const int k = rho.num_qubits;
  if (k > 4) throw std::invalid_argument("tomography supports k <= 4");
  const std::size_t d = rho.dim();
  const std::size_t npauli = d * d;
  EMat acc = EMat::Zero(static_cast<Eigen::Index>(d),
                        static_cast<Eigen::Index>(d));
  for (std::size_t pidx = 0; pidx < npauli; ++pidx) {
    PauliString p = PauliString::identity(k);
    std::size_t rest = pidx;
    for (int q = 0; q < k; ++q) {
      p.letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(rest & 3);
      rest >>= 2;
    }
    const double ev = expectation(rho, p);
    if (ev == 0.0) continue;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        acc(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
            ev * pauli_entry(p.letters, r, c);
      }
    }
  }
  acc /= static_cast<double>(d);
  TomographyEstimate est;
  est.rho = from_eigen(acc, k);
  est.method = "exact-expectation";
  return est;
}

std::map<PauliSetting, CountsTable> sample_tomography_counts(
    const DensityMatrix& rho, std::size_t shots, RandomSource& rnd) {
  if (rho.num_qubits > 4) {
    throw std::invalid_argument("tomography supports k <= 4");
  }
  std::map<PauliSetting, CountsTable> out;
  for (const PauliSetting& setting : all_settings(rho.num_qubits)) {
    DensityMatrix rotated = rho;
    rotate_setting(rotated, setting);
    out[setting] = sample_counts(rotated, shots, rnd);
  }
  return out;
}

TomographyEstimate tomography_from_counts(
    int k, const std::map<PauliSetting, CountsTable>& counts) {
  if (k < 1 || k > 4) throw std::invalid_argument("tomography supports k <= 4");
  const auto settings = all_settings(k);
  std::size_t shots_per_setting = 0;
  for (const PauliSetting& s : settings) {
    const auto it = counts.find(s);
    if (it == counts.end()) {
      std::string name;
      for (Basis b : s) name += basis_name(b);
      throw std::invalid_argument("tomography: missing setting " + name);
    }
    if (it->second.total == 0) {
      throw std::invalid_argument("tomography: setting with zero shots");
    }
    shots_per_setting = std::max(shots_per_setting, it->second.total);
  }

  const std::size_t d = std::size_t{1} << k;
  EMat acc = EMat::Zero(static_cast<Eigen::Index>(d),
                        static_cast<Eigen::Index>(d));
  for (std::size_t pidx = 0; pidx < d * d; ++pidx) {
    std::vector<Pauli> letters(static_cast<std::size_t>(k));
    std::size_t rest = pidx;
    for (int q = 0; q < k; ++q) {
      letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(rest & 3);
      rest >>= 2;
    }
    // Average the +-1 products over every compatible setting.
    double num = 0.0;
    double den = 0.0;
    for (const PauliSetting& s : settings) {
      bool compatible = true;
      for (int q = 0; q < k && compatible; ++q) {
        const Pauli l = letters[static_cast<std::size_t>(q)];
        if (l == Pauli::I) continue;
        if ((l == Pauli::X && s[static_cast<std::size_t>(q)] != Basis::X) ||
            (l == Pauli::Y && s[static_cast<std::size_t>(q)] != Basis::Y) ||
            (l == Pauli::Z && s[static_cast<std::size_t>(q)] != Basis::Z)) {
          compatible = false;
        }
      }
      if (!compatible) continue;
      const CountsTable& table = counts.at(s);
      for (const auto& [key, n] : table.counts) {
        int sign = 1;
        for (int q = 0; q < k; ++q) {
          if (letters[static_cast<std::size_t>(q)] != Pauli::I &&
              key[static_cast<std::size_t>(q)] == '1') {
            sign = -sign;
          }
        }
        num += sign * static_cast<double>(n);
      }
      den += static_cast<double>(table.total);
    }
    const double ev = num / den;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        acc(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
            ev * pauli_entry(letters, r, c);
      }
    }
  }
  acc /= static_cast<double>(d);

  TomographyEstimate est;
  est.method = "shot-sampled";
  est.shots_per_setting = shots_per_setting;

  Eigen::SelfAdjointEigenSolver<EMat> es(acc);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    // Clip negative eigenvalues, renormalize the trace.
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    acc = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    est.projected = true;
  }
  est.rho = from_eigen(acc, k);
  return est;
}

// -- correlation matrix ----------------------------------------------------------

CorrelationMatrix correlation_matrix(const CountsTable& z_counts) {
  if (z_counts.total < 100) {
    throw std::invalid_argument(
        "correlation_matrix: need at least 100 shots, got " +
        std::to_string(z_counts.total));
  }
  CorrelationMatrix m;
  m.shots = z_counts.total;
  const double n = static_cast<double>(z_counts.total);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        m.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0;
        continue;
      }
      double sum = 0.0;
      for (const auto& [key, cnt] : z_counts.counts) {
        if (key.size() != 4) {
          throw std::invalid_argument("correlation_matrix: need 4-bit records");
        }
        const int zi = key[static_cast<std::size_t>(i)] == '1' ? -1 : 1;
        const int zj = key[static_cast<std::size_t>(j)] == '1' ? -1 : 1;
        sum += static_cast<double>(cnt) * zi * zj;
      }
      const double mean = sum / n;
      // Binomial error of the agreement fraction p = (1 + mean)/2.
      const double p = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
      m.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = mean;
      m.std_error[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          2.0 * std::sqrt(p * (1.0 - p) / n);
    }
  }
  return m;
}

CorrelationMatrix correlation_matrix_exact(const DensityMatrix& rho4) {
  if (rho4.num_qubits != 4) {
    throw std::invalid_argument("correlation_matrix_exact needs 4 qubits");
  }
  CorrelationMatrix m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        m.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0;
        continue;
      }
      PauliString p = PauliString::identity(4);
      p.letters[static_cast<std::size_t>(i)] = Pauli::Z;
      p.letters[static_cast<std::size_t>(j)] = Pauli::Z;
      m.value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          expectation(rho4, p);
    }
  }
  return m;
}

// -- protocol execution -----------------------------------------------------------

namespace {

std::vector<int> pattern_to_outcomes(const ProtocolInstance& p) {
  const std::string& pat = p.mode.pattern;
  if (pat.size() != p.measured.size()) {
    throw std::invalid_argument("post-select pattern covers " +
                                std::to_string(pat.size()) +
                                " bits, protocol measures " +
                                std::to_string(p.measured.size()));
  }
  std::vector<int> out;
  out.reserve(pat.size());
  for (char ch : pat) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("post-select pattern must be 0/1 chars");
    }
    out.push_back(ch == '1' ? 1 : 0);
  }
  return out;
}

std::vector<int> identity_positions(int n) {
  std::vector<int> pos(static_cast<std::size_t>(n));
  std::iota(pos.begin(), pos.end(), 0);
  return pos;
}

void pair_metrics_from_state(const ProtocolInstance& p,
                             const DensityMatrix& full_or_terminal,
                             bool is_terminal_state,
                             std::vector<PairMetrics>* out) {
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    const auto& [a, b] = p.pairs[i];
    std::vector<int> keep;
    if (is_terminal_state) {
      keep = {p.terminal_position(a), p.terminal_position(b)};
    } else {
      keep = {a, b};
    }
    const DensityMatrix pair = partial_trace(full_or_terminal, keep);
    PairMetrics pm;
    pm.label = p.pair_label(i);
    pm.F.value = fidelity(pair, p.pair_target);
    const DensityMatrix framed =
        p.bell_transform_pairs ? bell_frame(pair) : pair;
    pm.S.value = chsh_s(framed);
    pm.C = concurrence(pair);
    out->push_back(std::move(pm));
  }
}

// Corrected pure state over the terminals for one trajectory shot: measured
// qubits slice away as products, byproducts derived from the outcome record.
PureState corrected_terminal_state(const ProtocolInstance& p,
                                   const PureState& final_state,
                                   const std::vector<int>& outcomes) {
  PureState st = final_state;
  // Slice measured qubits highest-first so lower indices stay valid.
  std::vector<std::pair<int, int>> cut;  // (qubit, outcome)
  cut.reserve(p.measured.size());
  for (std::size_t i = 0; i < p.measured.size(); ++i) {
    cut.emplace_back(p.measured[i].first, outcomes[i]);
  }
  std::sort(cut.begin(), cut.end(), std::greater<>());
  for (const auto& [q, bit] : cut) st = slice_qubit(st, q, bit);

  const auto corrections = byproduct_correction(p, outcomes);
  std::vector<int> positions(static_cast<std::size_t>(p.circuit.num_qubits),
                             -1);
  for (std::size_t i = 0; i < p.terminals.size(); ++i) {
    positions[static_cast<std::size_t>(p.terminals[i])] = static_cast<int>(i);
  }
  apply_corrections(st, corrections, positions);
  return st;
}

}  // namespace

ExactProtocolResult run_protocol_exact(const ProtocolInstance& p,
                                       const NoiseModel& noise) {
  const NoisyCircuit nc = instrument(p.circuit, noise);
  ExactProtocolResult res;
  res.run = run_density(nc);

  const std::vector<int> positions = identity_positions(p.circuit.num_qubits);
  DensityMatrix full = DensityMatrix::zeros_state(p.circuit.num_qubits);
  std::fill(full.data.begin(), full.data.end(), cplx{0, 0});

  if (p.mode.kind == Mode::Kind::PostSelect) {
    const std::vector<int> want = pattern_to_outcomes(p);
    const Branch* hit = nullptr;
    for (const Branch& b : res.run.branches) {
      if (b.outcomes == want) {
        hit = &b;
        break;
      }
    }
    if (!hit) {
      throw std::invalid_argument(
          "post-selected pattern has zero probability");
    }
    res.selected_probability = hit->probability;
    full = hit->state;
    apply_corrections(full, byproduct_correction(p, hit->outcomes), positions);
  } else {
    double total = 0.0;
    for (const Branch& b : res.run.branches) {
      DensityMatrix corrected = b.state;
      apply_corrections(corrected, byproduct_correction(p, b.outcomes),
                        positions);
      kernels::active().axpy(full.data.data(), corrected.data.data(),
                             full.data.size(), cplx{b.probability, 0});
      total += b.probability;
    }
    kernels::active().scale(full.data.data(), full.data.size(),
                            cplx{1.0 / total, 0});
    res.selected_probability = total;
  }

  res.terminal_state = partial_trace(full, p.terminals);
  res.target_fidelity = fidelity(res.terminal_state, p.target);
  pair_metrics_from_state(p, full, false, &res.pairs);
  return res;
}

TrajectoryProtocolResult run_protocol_trajectories(const ProtocolInstance& p,
                                                   const NoiseModel& noise,
                                                   std::size_t shots,
                                                   std::uint64_t seed) {
  const NoisyCircuit nc = instrument(p.circuit, noise);
  const int k = static_cast<int>(p.terminals.size());
  // Wide terminal registers (mqnc-step1) skip the averaged matrix; the
  // target fidelity is still exact as a per-shot overlap mean.
  const bool track_matrix = k >= 1 && k <= kMaxDensityQubits;

  TrajectoryProtocolResult res;
  std::vector<int> want;
  if (p.mode.kind == Mode::Kind::PostSelect) want = pattern_to_outcomes(p);

  DensityMatrix accum;
  if (track_matrix) {
    accum = DensityMatrix::zeros_state(k);
    std::fill(accum.data.begin(), accum.data.end(), cplx{0, 0});
  }
  double overlap_sum = 0.0;
  std::size_t kept = 0;

  run_trajectories(nc, shots, seed, [&](const TrajectoryShot& shot) {
    res.outcomes.add(CountsTable::key_of(shot.outcomes));
    if (!want.empty() && shot.outcomes != want) return;
    const PureState term = corrected_terminal_state(p, shot.state, shot.outcomes);
    overlap_sum += overlap2(term, p.target);
    if (track_matrix) {
      const std::size_t d = term.dim();
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
          accum.at(r, c) += term.amp[r] * std::conj(term.amp[c]);
        }
      }
    }
    ++kept;
  });

  if (kept == 0) {
    throw std::invalid_argument("no shots survived post-selection");
  }
  res.kept_shots = kept;
  res.target_fidelity = overlap_sum / static_cast<double>(kept);
  if (track_matrix) {
    kernels::active().scale(accum.data.data(), accum.data.size(),
                            cplx{1.0 / static_cast<double>(kept), 0});
    res.terminal_state = accum;
    pair_metrics_from_state(p, accum, true, &res.pairs);
  }
  return res;
}

CountsTable correlation_counts(const ProtocolInstance& p,
                               const NoiseModel& noise, std::size_t shots,
                               std::uint64_t seed) {
  if (p.terminals.size() != 4 || p.pairs.size() != 2) {
    throw std::invalid_argument("correlation_counts needs a 2-pair protocol");
  }
  const NoisyCircuit nc = instrument(p.circuit, noise);
  std::vector<int> want;
  if (p.mode.kind == Mode::Kind::PostSelect) want = pattern_to_outcomes(p);

  CountsTable table;
  run_trajectories(nc, shots, seed, [&](const TrajectoryShot& shot) {
    if (!want.empty() && shot.outcomes != want) return;
    PureState term = corrected_terminal_state(p, shot.state, shot.outcomes);
    if (p.bell_transform_pairs) {
      for (const auto& pr : p.pairs) {
        apply(term, Gate::h(p.terminal_position(pr.second)));
      }
    }
    CounterRng rnd = CounterRng::derive(mix64(seed ^ 0x636f7272656c6174ull),
                                        shot.index);
    std::string key(4, '0');
    for (int q = 0; q < 4; ++q) {
      const MeasureResult r = measure(term, q, Basis::Z, rnd);
      if (r.bit) key[static_cast<std::size_t>(q)] = '1';
    }
    table.add(key);
  });
  return table;
}

// -- sweeps -------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace needs n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0) {
      throw std::invalid_argument("sweep grid epsilon outside [0, 1]");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("sweep grid must be strictly increasing");
    }
  }
}

// Tomography-based pair metrics for one (epsilon, repeat) cell: 3^2 settings,
// both pairs measured from the same runs via marginal counts.
std::vector<PairMetrics> trajectory_point(const ProtocolInstance& p,
                                          const NoiseModel& noise,
                                          std::size_t shots,
                                          std::uint64_t cell_seed) {
  const NoisyCircuit nc = instrument(p.circuit, noise);
  std::vector<int> want;
  if (p.mode.kind == Mode::Kind::PostSelect) want = pattern_to_outcomes(p);

  const auto settings = all_settings(2);
  std::vector<std::map<PauliSetting, CountsTable>> per_pair(p.pairs.size());

  for (std::size_t si = 0; si < settings.size(); ++si) {
    const PauliSetting& setting = settings[si];
    std::vector<CountsTable> tables(p.pairs.size());
    const std::uint64_t run_seed = mix64(cell_seed ^ mix64(si + 1));
    run_trajectories(nc, shots, run_seed, [&](const TrajectoryShot& shot) {
      if (!want.empty() && shot.outcomes != want) return;
      PureState term = corrected_terminal_state(p, shot.state, shot.outcomes);
      if (p.bell_transform_pairs) {
        for (const auto& pr : p.pairs) {
          apply(term, Gate::h(p.terminal_position(pr.second)));
        }
      }
      // Rotate each pair's qubits into the setting and sample once.
      for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
        const int qa = p.terminal_position(p.pairs[pi].first);
        const int qb = p.terminal_position(p.pairs[pi].second);
        for (const auto& [q, ax] :
             {std::pair{qa, setting[0]}, std::pair{qb, setting[1]}}) {
          if (ax == Basis::X) {
            apply(term, Gate::h(q));
          } else if (ax == Basis::Y) {
            apply(term, Gate::sdg(q));
            apply(term, Gate::h(q));
          }
        }
      }
      CounterRng rnd = CounterRng::derive(run_seed ^ 0x73616d706c65ull,
                                          shot.index);
      std::vector<int> bits(static_cast<std::size_t>(term.num_qubits));
      for (int q = 0; q < term.num_qubits; ++q) {
        bits[static_cast<std::size_t>(q)] = measure(term, q, Basis::Z, rnd).bit;
      }
      for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
        const int qa = p.terminal_position(p.pairs[pi].first);
        const int qb = p.terminal_position(p.pairs[pi].second);
        std::string key(2, '0');
        if (bits[static_cast<std::size_t>(qa)]) key[0] = '1';
        if (bits[static_cast<std::size_t>(qb)]) key[1] = '1';
        tables[pi].add(key);
      }
    });
    for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
      if (tables[pi].total == 0) {
        throw std::invalid_argument("no shots survived post-selection");
      }
      per_pair[pi][setting] = std::move(tables[pi]);
    }
  }

  std::vector<PairMetrics> out;
  for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
    const TomographyEstimate est = tomography_from_counts(2, per_pair[pi]);
    PairMetrics pm;
    pm.label = p.pair_label(pi);
    // The sampled pair was already moved to the Bell frame, so fidelity is
    // against the Bell-framed target and S evaluates directly.
    PureState target = p.pair_target;
    if (p.bell_transform_pairs) apply(target, Gate::h(1));
    pm.F.value = fidelity(est.rho, target);
    pm.S.value = chsh_s(est.rho);
    pm.C = concurrence(est.rho);
    out.push_back(std::move(pm));
  }
  return out;
}

}  // namespace

SweepResult epsilon_sweep(const ProtocolInstance& p, const SweepOptions& opt) {
  validate_grid(opt.grid);
  SweepResult res;
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    res.pair_labels.push_back(p.pair_label(i));
  }

  for (std::size_t gi = 0; gi < opt.grid.size(); ++gi) {
    const double eps = opt.grid[gi];
    NoiseModel nm;
    nm.epsilon = eps;
    nm.noisy_measurement = opt.noisy_measurement;

    SweepPoint point;
    point.epsilon = eps;
    if (opt.mode == SweepMode::Exact) {
      point.pairs = run_protocol_exact(p, nm).pairs;
    } else {
      // repeats x tomography cells; mean and standard error across repeats
      std::vector<std::vector<PairMetrics>> reps;
      for (int r = 0; r < opt.repeats; ++r) {
        const std::uint64_t cell_seed =
            mix64(mix64(opt.seed ^ mix64(gi)) ^ static_cast<std::uint64_t>(r));
        reps.push_back(trajectory_point(p, nm, opt.shots, cell_seed));
      }
      for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
        PairMetrics pm;
        pm.label = res.pair_labels[pi];
        double fsum = 0, ssum = 0, csum = 0;
        for (const auto& rep : reps) {
          fsum += rep[pi].F.value;
          ssum += rep[pi].S.value;
          csum += rep[pi].C;
        }
        const double n = static_cast<double>(reps.size());
        pm.F.value = fsum / n;
        pm.S.value = ssum / n;
        pm.C = csum / n;
        if (reps.size() > 1) {
          double fvar = 0, svar = 0;
          for (const auto& rep : reps) {
            fvar += (rep[pi].F.value - pm.F.value) * (rep[pi].F.value - pm.F.value);
            svar += (rep[pi].S.value - pm.S.value) * (rep[pi].S.value - pm.S.value);
          }
          pm.F.std_error = std::sqrt(fvar / (n * (n - 1)));
          pm.S.std_error = std::sqrt(svar / (n * (n - 1)));
        }
        point.pairs.push_back(std::move(pm));
      }
    }
    res.points.push_back(std::move(point));
  }

  for (std::size_t pi = 0; pi < p.pairs.size(); ++pi) {
    std::vector<double> eps, s;
    for (const SweepPoint& pt : res.points) {
      eps.push_back(pt.epsilon);
      s.push_back(pt.pairs[pi].S.value);
    }
    bool smoothed = false;
    res.epsilon_crit.push_back(epsilon_crit(eps, s, &smoothed));
    res.smoothed = res.smoothed || smoothed;
  }
  return res;
}

std::optional<double> epsilon_crit(const std::vector<double>& eps,
                                   const std::vector<double>& s,
                                   bool* smoothed) {
  if (eps.size() != s.size()) {
    throw std::invalid_argument("epsilon_crit: length mismatch");
  }
  if (smoothed) *smoothed = false;
  if (eps.size() < 2) return std::nullopt;

  // Expect non-increasing S; repair violations with pool-adjacent-violators
  // (antitonic regression) before interpolating.
  std::vector<double> fit = s;
  bool violated = false;
  for (std::size_t i = 1; i < fit.size(); ++i) {
    if (fit[i] > fit[i - 1] + 1e-9) {
      violated = true;
      break;
    }
  }
  if (violated) {
    if (smoothed) *smoothed = true;
    std::vector<double> value;
    std::vector<std::size_t> weight;
    for (double x : s) {
      value.push_back(x);
      weight.push_back(1);
      while (value.size() > 1 && value[value.size() - 2] < value.back()) {
        const double merged =
            (value[value.size() - 2] * static_cast<double>(weight[weight.size() - 2]) +
             value.back() * static_cast<double>(weight.back())) /
            static_cast<double>(weight[weight.size() - 2] + weight.back());
        weight[weight.size() - 2] += weight.back();
        value[value.size() - 2] = merged;
        value.pop_back();
        weight.pop_back();
      }
    }
    fit.clear();
    for (std::size_t i = 0; i < value.size(); ++i) {
      fit.insert(fit.end(), weight[i], value[i]);
    }
  }

  for (std::size_t i = 0; i + 1 < fit.size(); ++i) {
    if (fit[i] >= 2.0 && fit[i + 1] <= 2.0) {
      const double den = fit[i] - fit[i + 1];
      if (den < 1e-15) return 0.5 * (eps[i] + eps[i + 1]);
      const double t = (fit[i] - 2.0) / den;
      return eps[i] + t * (eps[i + 1] - eps[i]);
    }
  }
  return std::nullopt;
}

}  // namespace qnet
