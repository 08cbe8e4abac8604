// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Characteristic feature matrices.
//
// For a probe rho and a readout projector O, the difference in the
// probability of O between parameter distributions A and B is
//
//     Delta = sum_{a,b} rho[a,b] F[a,b] O[b,a],
//     F[a,b] = chi_A(q(a) - q(b)) - chi_B(q(a) - q(b)),
//
// with chi(k) = E[exp(-i k . theta)] and q the sensing eigenvalue map.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "stochsense/common.hpp"
#include "stochsense/distributions.hpp"
#include "stochsense/qsim.hpp"
#include "stochsense/rng.hpp"

namespace stochsense {

inline constexpr int kMaxFeatureQubits = 10;

using CharacteristicFn = std::function<Complex(std::span<const double>)>;

inline CharacteristicFn analytic_chi(DistributionSpec spec) {
  return [spec = std::move(spec)](std::span<const double> k) {
    return characteristic_function(spec, k);
  };
}

inline CharacteristicFn ensemble_chi(XXZGibbsSpec spec) {
  return [spec = std::move(spec)](std::span<const double> k) {
    return empirical_characteristic_function(spec, k);
  };
}

/// chi of the empirical distribution of `n_samples` draws from `spec`.
inline CharacteristicFn sampled_chi(const DistributionSpec& spec, long long n_samples,
                                    RandomStream& rng) {
  if (n_samples < 1) throw std::invalid_argument("sampled chi: n_samples must be >= 1");
  auto pts = std::make_shared<std::vector<std::vector<double>>>();
  pts->reserve(static_cast<std::size_t>(n_samples));
  for (long long i = 0; i < n_samples; ++i) pts->push_back(sample(spec, rng));
  return [pts](std::span<const double> k) {
    Complex s = 0.0;
    for (const auto& t : *pts) {
      double ph = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) ph += k[j] * t[j];
      s += std::polar(1.0, -ph);
    }
    return s / static_cast<double>(pts->size());
  };
}

struct FeatureMatrix {
  EigenvalueMap map;
  CMatrix entries;

  int n_qubits() const { return map.n_qubits(); }
  Complex operator()(std::size_t a, std::size_t b) const {
    return entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
};

inline FeatureMatrix build_feature_matrix(const CharacteristicFn& chi_a,
                                          const CharacteristicFn& chi_b,
                                          const EigenvalueMap& map) {
  if (map.n_qubits() > kMaxFeatureQubits)
    throw ResourceCapError("feature matrix: too many qubits for a dense matrix");
  const auto d = static_cast<Eigen::Index>(map.dim());
  CMatrix f = CMatrix::Zero(d, d);
  std::vector<double> k(static_cast<std::size_t>(map.n_params()));
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      for (int j = 0; j < map.n_params(); ++j)
        k[static_cast<std::size_t>(j)] = map.q(static_cast<std::size_t>(a), j) -
                                         map.q(static_cast<std::size_t>(b), j);
      f(a, b) = chi_a(k) - chi_b(k);
      f(b, a) = std::conj(f(a, b));
    }
  }
  return {map, std::move(f)};
}

struct ProbeObservablePair {
  DensityMatrix rho;
  CMatrix projector;

  void validate(double tol = 1e-10) const {
    if (!rho.is_valid(tol)) throw std::invalid_argument("pair: rho is not a density matrix");
    if (projector.rows() != rho.matrix().rows() || projector.cols() != rho.matrix().cols())
      throw std::invalid_argument("pair: projector and rho sizes differ");
    if ((projector - projector.adjoint()).cwiseAbs().maxCoeff() > tol ||
        (projector * projector - projector).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("pair: observable is not a projector");
  }
};

/// sum_{a,b} rho[a,b] F[a,b] O[b,a], i.e. Tr(O rho_A) - Tr(O rho_B).
inline double separation_value(const ProbeObservablePair& pair, const FeatureMatrix& f,
                               double tol = 1e-10) {
  const CMatrix& rho = pair.rho.matrix();
  if (rho.rows() != f.entries.rows() || pair.projector.rows() != f.entries.rows())
    throw std::invalid_argument("separation value: dimension mismatch");
  const Complex s = (rho.cwiseProduct(f.entries).cwiseProduct(pair.projector.transpose())).sum();
  if (std::abs(s.imag()) > tol * std::max(1.0, std::abs(s.real())))
    throw std::runtime_error("separation value: imaginary part above tolerance");
  return s.real();
}

/// No single entry pair dominates the feature matrix.
class AmbiguousPairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-state probe on the largest entry F[a*, b*] (a* < b*):
///   probe     (|a*> + e^{i phi} |b*>) / sqrt(2)
///   readout   (|a*> - i e^{i phi} |b*>) / sqrt(2)
/// with phi = arg F[a*, b*] - pi/2. This reaches Delta = |F[a*, b*]| / 2.
inline ProbeObservablePair optimal_sparse_pair(const FeatureMatrix& f, double rel_tol = 1e-9) {
  const auto d = f.entries.rows();
  double best = 0.0;
  Eigen::Index ba = 0, bb = 0;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a + 1; b < d; ++b)
      if (std::abs(f.entries(a, b)) > best) {
        best = std::abs(f.entries(a, b));
        ba = a;
        bb = b;
      }
  if (best == 0.0) throw AmbiguousPairError("optimal pair: feature matrix is zero");
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a + 1; b < d; ++b)
      if ((a != ba || b != bb) && std::abs(f.entries(a, b)) >= (1.0 - rel_tol) * best)
        throw AmbiguousPairError("optimal pair: no single dominant entry");
  const double phi = std::arg(f.entries(ba, bb)) - kPi / 2;
  CVector probe = CVector::Zero(d), readout = CVector::Zero(d);
  probe(ba) = 1.0;
  probe(bb) = std::polar(1.0, phi);
  readout(ba) = 1.0;
  readout(bb) = Complex(0.0, -1.0) * std::polar(1.0, phi);
  probe /= std::sqrt(2.0);
  readout /= std::sqrt(2.0);
  return {DensityMatrix(probe * probe.adjoint()), readout * readout.adjoint()};
}

/// Product probe and product measurement, both given by Bloch angles.
struct ProductSetting {
  std::vector<double> probe_theta, probe_phi, basis_theta, basis_phi;
};

namespace featmat_detail {

inline CVector kron_all(const std::vector<Eigen::Vector2cd>& parts) {
  CVector v = CVector::Ones(1);
  for (const auto& p : parts) {
    CVector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * p(0);
      next(2 * i + 1) = v(i) * p(1);
    }
    v = std::move(next);
  }
  return v;
}

inline Eigen::Vector2cd bloch(double t, double p) {
  return {std::cos(0.5 * t), std::sin(0.5 * t) * Complex(std::cos(p), std::sin(p))};
}

inline Eigen::Vector2cd bloch_orthogonal(double t, double p) {
  return {-std::sin(0.5 * t) * Complex(std::cos(p), -std::sin(p)), std::cos(0.5 * t)};
}

/// Probe vector and the contribution m^dagger (rho o F) m of every outcome.
inline std::vector<double> contributions(const FeatureMatrix& f, const ProductSetting& s,
                                         CVector* probe_out = nullptr,
                                         std::vector<CVector>* outcomes = nullptr) {
  const int n = f.n_qubits();
  std::vector<Eigen::Vector2cd> parts(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) parts[j] = bloch(s.probe_theta[j], s.probe_phi[j]);
  const CVector psi = kron_all(parts);
  const CMatrix m = (psi * psi.adjoint()).cwiseProduct(f.entries);
  const std::size_t n_out = std::size_t(1) << n;
  std::vector<double> c(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    for (int j = 0; j < n; ++j)
      parts[j] = qubit_bit(o, j, n) ? bloch_orthogonal(s.basis_theta[j], s.basis_phi[j])
                                    : bloch(s.basis_theta[j], s.basis_phi[j]);
    CVector v = kron_all(parts);
    c[o] = v.dot(m * v).real();
    if (outcomes) outcomes->push_back(std::move(v));
  }
  if (probe_out) *probe_out = psi;
  return c;
}

inline double objective(const FeatureMatrix& f, const ProductSetting& s) {
  double v = 0.0;
  for (double c : contributions(f, s)) v += std::max(c, 0.0);
  return v;
}

inline ProductSetting unpack(const Eigen::VectorXd& x, int n) {
  ProductSetting s;
  for (int j = 0; j < n; ++j) {
    s.probe_theta.push_back(x(4 * j));
    s.probe_phi.push_back(x(4 * j + 1));
    s.basis_theta.push_back(x(4 * j + 2));
    s.basis_phi.push_back(x(4 * j + 3));
  }
  return s;
}

/// Nelder-Mead maximisation of `fn` from `x0`.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                                   Eigen::VectorXd x0, double step, int max_evals, double tol) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += step;
  int evals = 0;
  for (std::size_t i = 0; i < pts.size(); ++i, ++evals) val[i] = -fn(pts[i]);
  std::vector<std::size_t> order(pts.size());
  while (evals < max_evals) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (std::abs(val[worst] - val[best]) < tol) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i : order)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = -fn(xr);
    ++evals;
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = -fn(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (pts[worst] - centroid);
      const double fc = -fn(xc);
      ++evals;
      if (fc < val[worst]) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (std::size_t i : order) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = -fn(pts[i]);
          ++evals;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < val.size(); ++i)
    if (val[i] < val[best]) best = i;
  return pts[best];
}

}  // namespace featmat_detail

struct ProductSearchSettings {
  int coarse_candidates = 256;
  int starts = 12;
  int max_evals = 4000;
  int restarts = 2;
  double tolerance = 1e-13;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ProductSearchResult {
  /// Best separation found. It is a lower bound on the true product optimum.
  double value = 0.0;
  bool is_lower_bound = true;
  ProductSetting setting;
  ProbeObservablePair pair;
};

/// Product probe and product-basis readout realising `setting`, with the
/// readout projector summing the outcomes of positive contribution.
inline ProbeObservablePair product_pair(const FeatureMatrix& f, const ProductSetting& setting) {
  CVector psi;
  std::vector<CVector> outs;
  std::vector<double> c = featmat_detail::contributions(f, setting, &psi, &outs);
  const auto d = f.entries.rows();
  CMatrix proj = CMatrix::Zero(d, d);
  for (std::size_t o = 0; o < c.size(); ++o)
    if (c[o] > 0.0) proj += outs[o] * outs[o].adjoint();
  return {DensityMatrix(psi * psi.adjoint()), proj};
}

/// Multi-start search for the largest separation reachable with a product
/// probe and a projector assembled from a product measurement basis.
inline ProductSearchResult best_product_separation(const FeatureMatrix& f,
                                                   const ProductSearchSettings& settings = {}) {
  const int n = f.n_qubits();
  if (n > 6) throw ResourceCapError("product search: at most 6 qubits");
  const Eigen::Index dim = 4 * n;
  auto fn = [&](const Eigen::VectorXd& x) {
    return featmat_detail::objective(f, featmat_detail::unpack(x, n));
  };
  RandomStream rng(settings.seed);
  std::vector<std::pair<double, Eigen::VectorXd>> coarse;
  for (int c = 0; c < settings.coarse_candidates; ++c) {
    Eigen::VectorXd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const bool polar = i % 2 == 0;
      // Half of the candidates sit on a quarter-turn lattice, the rest are
      // uniform on the Bloch sphere.
      if (c % 2 == 0) {
        x(i) = polar ? kPi / 2 * static_cast<double>(rng() % 3)
                     : kPi / 2 * static_cast<double>(rng() % 4);
      } else {
        x(i) = polar ? std::acos(1.0 - 2.0 * rng.uniform()) : kTwoPi * rng.uniform();
      }
    }
    coarse.emplace_back(fn(x), x);
  }
  std::stable_sort(coarse.begin(), coarse.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const int starts = std::min<int>(settings.starts, static_cast<int>(coarse.size()));
  std::vector<std::pair<double, Eigen::VectorXd>> refined(static_cast<std::size_t>(starts));
  parallel_for(static_cast<std::size_t>(starts), settings.threads, [&](std::size_t s) {
    Eigen::VectorXd x = coarse[s].second;
    double step = 0.3;
    for (int r = 0; r <= settings.restarts; ++r, step *= 0.3)
      x = featmat_detail::nelder_mead(fn, x, step, settings.max_evals, settings.tolerance);
    refined[s] = {fn(x), x};
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < refined.size(); ++s)
    if (refined[s].first > refined[best].first) best = s;
  ProductSearchResult out{0.0, true, {}, {DensityMatrix(CMatrix::Identity(1, 1)), CMatrix()}};
  const Eigen::VectorXd x = starts > 0 ? refined[best].second : coarse.front().second;
  out.setting = featmat_detail::unpack(x, n);
  out.pair = product_pair(f, out.setting);
  out.value = starts > 0 ? refined[best].first : coarse.front().first;
  return out;
}

/// |+>^n probe and even-parity projector of a per-qubit basis
/// (|0> +- e^{i beta}|1>) / sqrt(2), with beta chosen to align with
/// F[0, 2^n - 1].
inline ProbeObservablePair hadamard_parity_pair(const FeatureMatrix& f) {
  const int n = f.n_qubits();
  const auto d = f.entries.rows();
  const double beta = -std::arg(f.entries(0, d - 1)) / n;
  ProductSetting s;
  for (int j = 0; j < n; ++j) {
    s.probe_theta.push_back(kPi / 2);
    s.probe_phi.push_back(0.0);
    s.basis_theta.push_back(kPi / 2);
    s.basis_phi.push_back(beta);
  }
  CVector psi;
  std::vector<CVector> outs;
  featmat_detail::contributions(f, s, &psi, &outs);
  CMatrix proj = CMatrix::Zero(d, d);
  for (std::size_t o = 0; o < outs.size(); ++o)
    if (popcount(o) % 2 == 0) proj += outs[o] * outs[o].adjoint();
  return {DensityMatrix(psi * psi.adjoint()), proj};
}

/// One-sided 90% standard normal quantile used in the shot bound.
inline constexpr double kZ90 = 1.2815515655446004;

struct BoundReport {
  std::vector<double> rms;          ///< F_RMS(d), indexed by Hamming distance d.
  std::vector<double> mean_abs;     ///< mean |F| at distance d.
  std::vector<long long> pairs;     ///< ordered pairs at distance d.
  std::vector<double> rms_bound;    ///< F_RMS(d) sqrt(C(N, d)).
  std::vector<double> mean_bound;   ///< C(N, d) mean |F|.
  double product_bound = 0.0;       ///< sum_d rms_bound.
  double mean_bound_total = 0.0;    ///< sum_d mean_bound.
  double delta = 0.0;
  double shots_90 = 0.0;            ///< z*^2 / (4 Delta^2); infinite when Delta = 0.
};

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Statistics of |F| grouped by the Hamming distance of the basis pair, plus
/// the shot lower bound for a separation `delta`.
inline BoundReport theorem_bound_report(const FeatureMatrix& f, double delta = 0.0) {
  const int n = f.n_qubits();
  BoundReport r;
  r.rms.assign(static_cast<std::size_t>(n + 1), 0.0);
  r.mean_abs.assign(static_cast<std::size_t>(n + 1), 0.0);
  r.pairs.assign(static_cast<std::size_t>(n + 1), 0);
  const auto d = static_cast<std::size_t>(f.entries.rows());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto h = static_cast<std::size_t>(popcount(a ^ b));
      const double m = std::abs(f(a, b));
      r.rms[h] += m * m;
      r.mean_abs[h] += m;
      ++r.pairs[h];
    }
  for (int h = 0; h <= n; ++h) {
    const auto i = static_cast<std::size_t>(h);
    r.rms[i] = std::sqrt(r.rms[i] / static_cast<double>(r.pairs[i]));
    r.mean_abs[i] /= static_cast<double>(r.pairs[i]);
    r.rms_bound.push_back(r.rms[i] * std::sqrt(binomial(n, h)));
    r.mean_bound.push_back(binomial(n, h) * r.mean_abs[i]);
    r.product_bound += r.rms_bound.back();
    r.mean_bound_total += r.mean_bound.back();
  }
  r.delta = delta;
  r.shots_90 = delta != 0.0 ? kZ90 * kZ90 / (4.0 * delta * delta)
                            : std::numeric_limits<double>::infinity();
  return r;
}

/// CSV rows a, b, Re F, Im F.
inline void write_feature_matrix_csv(std::ostream& os, const FeatureMatrix& f) {
  os << "a,b,re_F,im_F\n";
  char buf[96];
  const auto d = f.entries.rows();
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      std::snprintf(buf, sizeof buf, "%lld,%lld,%.12g,%.12g\n", static_cast<long long>(a),
                    static_cast<long long>(b), f.entries(a, b).real(), f.entries(a, b).imag());
      os << buf;
    }
}

}  // namespace stochsense
