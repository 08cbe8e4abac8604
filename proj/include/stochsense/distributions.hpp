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

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "stochsense/common.hpp"
#include "stochsense/qsim.hpp"
#include "stochsense/rng.hpp"
#include "stochsense/xxz.hpp"

namespace stochsense {

/// Multivariate Gaussian over the phases. The two-parameter form used for
/// the Bell/product task comes from `pair`.
class CorrelatedGaussianSpec {
 public:
  CorrelatedGaussianSpec(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
      : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (mean_.size() < 1 || cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
      throw std::invalid_argument("gaussian: mean and covariance sizes differ");
    if (!mean_.allFinite() || !cov_.allFinite())
      throw std::invalid_argument("gaussian: non-finite entries");
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("gaussian: covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("gaussian: covariance is not positive semidefinite");
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
    } else {
      factor_ = es.eigenvectors() *
                es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }
  }

  /// Covariance [[s2, sc2], [sc2, s2]] around (mean1, mean2).
  static CorrelatedGaussianSpec pair(double mean1, double mean2, double sigma2,
                                     double sigma_corr2) {
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("gaussian: sigma2 must be >= 0");
    if (std::abs(sigma_corr2) > sigma2)
      throw std::invalid_argument("gaussian: |sigma_corr2| must not exceed sigma2");
    Eigen::Vector2d m(mean1, mean2);
    Eigen::Matrix2d c;
    c << sigma2, sigma_corr2, sigma_corr2, sigma2;
    return CorrelatedGaussianSpec(m, c);
  }

  int n_params() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

/// theta_1..theta_{n-1} uniform on [interval_start, interval_start +
/// interval_width); theta_n fixed by sum_j alpha_j theta_j = C + noise, with
/// noise ~ N(0, noise_sigma^2). theta_n is not wrapped.
struct ConstrainedUniformSpec {
  int n = 2;
  std::vector<double> alpha;
  double constraint_c = 0.0;
  double noise_sigma = 0.0;
  double interval_start = 0.0;
  double interval_width = kTwoPi;

  static ConstrainedUniformSpec uniform_sum(int n, double c) {
    ConstrainedUniformSpec s;
    s.n = n;
    s.alpha.assign(static_cast<std::size_t>(n), 1.0);
    s.constraint_c = c;
    return s;
  }

  int n_params() const { return n; }

  void validate() const {
    if (n < 1) throw std::invalid_argument("constrained uniform: n must be >= 1");
    if (static_cast<int>(alpha.size()) != n)
      throw std::invalid_argument("constrained uniform: alpha must have n entries");
    for (double a : alpha)
      if (!(a >= -1.0 && a <= 1.0))
        throw std::invalid_argument("constrained uniform: alpha entries must lie in [-1, 1]");
    if (alpha.back() == 0.0)
      throw std::invalid_argument("constrained uniform: alpha_n must be nonzero");
    if (!(noise_sigma >= 0.0))
      throw std::invalid_argument("constrained uniform: noise sigma must be >= 0");
    if (!(interval_width > 0.0) || !std::isfinite(interval_start))
      throw std::invalid_argument("constrained uniform: bad marginal interval");
    if (!std::isfinite(constraint_c))
      throw std::invalid_argument("constrained uniform: C must be finite");
  }
};

struct PointMass {
  std::vector<double> theta;
  int n_params() const { return static_cast<int>(theta.size()); }
};

/// theta = offset + direction * u with u uniform on [0, 2 pi).
struct UniformLineSpec {
  std::vector<double> direction;
  std::vector<double> offset;
  int n_params() const { return static_cast<int>(direction.size()); }
};

using DistributionSpec = std::variant<CorrelatedGaussianSpec, ConstrainedUniformSpec,
                                      XXZGibbsSpec, PointMass, UniformLineSpec>;

inline int n_params(const DistributionSpec& spec) {
  return std::visit([](const auto& s) { return s.n_params(); }, spec);
}

inline bool is_deterministic(const DistributionSpec& spec) {
  return std::holds_alternative<PointMass>(spec);
}

inline std::vector<double> sample(const DistributionSpec& spec, RandomStream& rng) {
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CorrelatedGaussianSpec>) {
          Eigen::VectorXd z(s.n_params());
          for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
          Eigen::VectorXd x = s.mean() + s.factor() * z;
          return std::vector<double>(x.data(), x.data() + x.size());
        } else if constexpr (std::is_same_v<T, ConstrainedUniformSpec>) {
          std::vector<double> theta(static_cast<std::size_t>(s.n));
          double acc = 0.0;
          for (int j = 0; j + 1 < s.n; ++j) {
            theta[j] = s.interval_start + s.interval_width * rng.uniform();
            acc += s.alpha[j] * theta[j];
          }
          double noise = s.noise_sigma > 0.0 ? s.noise_sigma * rng.normal() : 0.0;
          theta[s.n - 1] = (s.constraint_c + noise - acc) / s.alpha.back();
          return theta;
        } else if constexpr (std::is_same_v<T, XXZGibbsSpec>) {
          if (s.size() == 0) throw std::invalid_argument("xxz ensemble is empty");
          return (*s.thetas)[static_cast<std::size_t>(rng() % s.size())];
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return s.theta;
        } else {
          double u = kTwoPi * rng.uniform();
          std::vector<double> theta(s.direction.size());
          for (std::size_t j = 0; j < theta.size(); ++j)
            theta[j] = s.offset[j] + s.direction[j] * u;
          return theta;
        }
      },
      spec);
}

/// sin(x) / x.
inline double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

namespace dist_detail {

/// E[exp(-i m u)] for u uniform on [start, start + width).
inline Complex uniform_char(double m, double start, double width) {
  return std::polar(sinc(0.5 * m * width), -m * (start + 0.5 * width));
}

inline void check_k(std::span<const double> k, int n) {
  if (static_cast<int>(k.size()) != n)
    throw std::invalid_argument("characteristic function: k has wrong length");
}

}  // namespace dist_detail

/// chi(k) = E[exp(-i k . theta)].
inline Complex characteristic_function(const DistributionSpec& spec, std::span<const double> k) {
  return std::visit(
      [&](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        dist_detail::check_k(k, s.n_params());
        if constexpr (std::is_same_v<T, CorrelatedGaussianSpec>) {
          Eigen::Map<const Eigen::VectorXd> kv(k.data(), static_cast<Eigen::Index>(k.size()));
          double quad = kv.dot(s.covariance() * kv);
          return std::polar(std::exp(-0.5 * quad), -kv.dot(s.mean()));
        } else if constexpr (std::is_same_v<T, ConstrainedUniformSpec>) {
          const int n = s.n;
          const double an = s.alpha.back();
          const double kn = k[n - 1] / an;
          Complex out = std::polar(std::exp(-0.5 * std::pow(kn * s.noise_sigma, 2)),
                                   -kn * s.constraint_c);
          for (int j = 0; j + 1 < n; ++j)
            out *= dist_detail::uniform_char(k[j] - kn * s.alpha[j], s.interval_start,
                                             s.interval_width);
          return out;
        } else if constexpr (std::is_same_v<T, XXZGibbsSpec>) {
          throw std::invalid_argument(
              "characteristic function: no closed form for an XXZ Gibbs ensemble");
        } else if constexpr (std::is_same_v<T, PointMass>) {
          double ph = 0.0;
          for (std::size_t j = 0; j < k.size(); ++j) ph += k[j] * s.theta[j];
          return std::polar(1.0, -ph);
        } else {
          double m = 0.0, ph = 0.0;
          for (std::size_t j = 0; j < k.size(); ++j) {
            m += k[j] * s.direction[j];
            ph += k[j] * s.offset[j];
          }
          return std::polar(1.0, -ph) * dist_detail::uniform_char(m, 0.0, kTwoPi);
        }
      },
      spec);
}

struct ComplexEstimate {
  Complex value;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of chi(k) with the standard error of the mean of
/// exp(-i k . theta), taken as sqrt(E|z - mean|^2 / n).
inline ComplexEstimate characteristic_function_mc(const DistributionSpec& spec,
                                                  std::span<const double> k,
                                                  long long n_samples, RandomStream& rng) {
  if (n_samples < 1) throw std::invalid_argument("characteristic function: n_samples < 1");
  dist_detail::check_k(k, n_params(spec));
  if (is_deterministic(spec)) return {characteristic_function(spec, k), 0.0};
  Complex sum = 0.0;
  double sum_sq = 0.0;
  for (long long i = 0; i < n_samples; ++i) {
    std::vector<double> theta = sample(spec, rng);
    double ph = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) ph += k[j] * theta[j];
    sum += std::polar(1.0, -ph);
    sum_sq += 1.0;
  }
  const double n = static_cast<double>(n_samples);
  Complex mean = sum / n;
  double var = std::max(0.0, sum_sq / n - std::norm(mean));
  return {mean, std::sqrt(var / n)};
}

/// Exact chi(k) of the finite ensemble held by an XXZ Gibbs spec.
inline Complex empirical_characteristic_function(const XXZGibbsSpec& spec,
                                                 std::span<const double> k) {
  if (spec.size() == 0) throw std::invalid_argument("xxz ensemble is empty");
  dist_detail::check_k(k, spec.n_params());
  Complex sum = 0.0;
  for (const auto& theta : *spec.thetas) {
    double ph = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) ph += k[j] * theta[j];
    sum += std::polar(1.0, -ph);
  }
  return sum / static_cast<double>(spec.size());
}

/// Averaged density of `probe` under `dist`. A uniform line or a point mass
/// uses an equally spaced grid of `n_grid` points (exact once n_grid exceeds
/// the largest integer frequency difference); every other family uses
/// `n_grid` Monte Carlo draws.
inline DensityMatrix averaged_density(const StateVector& probe, const DistributionSpec& dist,
                                      const EigenvalueMap& map, int n_grid, RandomStream& rng) {
  if (n_grid < 1) throw std::invalid_argument("averaged_density: n_grid must be >= 1");
  if (n_params(dist) != map.n_params())
    throw std::invalid_argument("averaged_density: distribution and map sizes differ");
  std::vector<std::vector<double>> points;
  if (const auto* pm = std::get_if<PointMass>(&dist)) {
    points.push_back(pm->theta);
  } else if (const auto* line = std::get_if<UniformLineSpec>(&dist)) {
    for (int g = 0; g < n_grid; ++g) {
      double u = kTwoPi * g / n_grid;
      std::vector<double> theta(line->direction.size());
      for (std::size_t j = 0; j < theta.size(); ++j)
        theta[j] = line->offset[j] + line->direction[j] * u;
      points.push_back(std::move(theta));
    }
  } else {
    for (int g = 0; g < n_grid; ++g) points.push_back(sample(dist, rng));
  }
  return averaged_density(probe, map, points);
}

}  // namespace stochsense
