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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stochsense/common.hpp"
#include "stochsense/protocols.hpp"
#include "stochsense/rng.hpp"

namespace stochsense {

enum class Label { kA, kB };

/// (meanA - meanB)^2 / ((varA + varB) / 2).
inline double fisher_discriminant(double mean_a, double mean_b, double var_a, double var_b) {
  const double pooled = 0.5 * (var_a + var_b);
  if (!(pooled > 0.0)) throw std::invalid_argument("fisher discriminant: zero pooled variance");
  return (mean_a - mean_b) * (mean_a - mean_b) / pooled;
}

struct ClassModel {
  std::vector<double> a;
  std::vector<double> b;

  void validate(double tol = 1e-10) const {
    if (a.empty() || a.size() != b.size())
      throw std::invalid_argument("class model: tables must be nonempty and equal length");
    for (const auto* t : {&a, &b}) {
      double s = 0.0;
      for (double v : *t) {
        if (!(v >= 0.0)) throw std::invalid_argument("class model: negative probability");
        s += v;
      }
      if (std::abs(s - 1.0) > tol) throw std::invalid_argument("class model: table does not sum to 1");
    }
  }
};

namespace inference_detail {

inline void check_observed(std::span<const double> observed, const ClassModel& model) {
  if (observed.size() != model.a.size())
    throw std::invalid_argument("classifier: observed vector has wrong length");
  double s = 0.0;
  for (double v : observed) s += v;
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("classifier: observed does not sum to 1");
}

}  // namespace inference_detail

/// Nearest centroid in Euclidean distance; ties go to A.
inline Label mle_classify(std::span<const double> observed, const ClassModel& model) {
  inference_detail::check_observed(observed, model);
  double da = 0.0, db = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    da += (model.a[k] - observed[k]) * (model.a[k] - observed[k]);
    db += (model.b[k] - observed[k]) * (model.b[k] - observed[k]);
  }
  return db < da ? Label::kB : Label::kA;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total variation: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - q[k]);
  return 0.5 * s;
}

/// Smaller total variation distance; ties go to A.
inline Label tvd_classify(std::span<const double> observed, const ClassModel& model) {
  inference_detail::check_observed(observed, model);
  return total_variation(observed, model.b) < total_variation(observed, model.a) ? Label::kB
                                                                                 : Label::kA;
}

struct LinearEstimator {
  std::vector<double> weights;
  double bias = 0.0;
  bool rank_deficient = false;

  double predict(std::span<const double> x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("estimator: feature length mismatch");
    double y = bias;
    for (std::size_t k = 0; k < x.size(); ++k) y += weights[k] * x[k];
    return y;
  }
};

/// Least squares y ~ w.x + b. Features are centred before solving, so the
/// bias is unpenalised and the weights are the minimum-norm solution when the
/// centred design is rank deficient (flagged in the result).
inline LinearEstimator train_linear_estimator(const std::vector<std::vector<double>>& features,
                                              const std::vector<double>& targets) {
  if (features.empty() || features.size() != targets.size())
    throw std::invalid_argument("estimator: need matching, nonempty features and targets");
  const auto rows = static_cast<Eigen::Index>(features.size());
  const auto cols = static_cast<Eigen::Index>(features.front().size());
  if (cols < 1) throw std::invalid_argument("estimator: empty feature vectors");
  double t_min = targets.front(), t_max = targets.front();
  for (double t : targets) {
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(features[r].size()) != cols)
      throw std::invalid_argument("estimator: ragged feature vectors");
    for (Eigen::Index c = 0; c < cols; ++c) x(r, c) = features[r][c];
    y(r) = targets[r];
  }
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = y.mean();
  LinearEstimator out;
  out.weights.assign(static_cast<std::size_t>(cols), 0.0);
  out.bias = y_mean;
  if (t_max == t_min) {
    out.rank_deficient = true;
    return out;
  }
  Eigen::MatrixXd xc = x.rowwise() - x_mean;
  Eigen::VectorXd yc = y.array() - y_mean;
  // The rank threshold must be set before compute(): the Z factor is built
  // from the rank detected at that point.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rows, cols);
  cod.setThreshold(1e-12 * std::max<double>(rows, cols));
  cod.compute(xc);
  const double scale = xc.cwiseAbs().maxCoeff();
  Eigen::VectorXd w = scale > 0.0 ? Eigen::VectorXd(cod.solve(yc)) : Eigen::VectorXd::Zero(cols);
  out.rank_deficient = cod.rank() < cols;
  for (Eigen::Index c = 0; c < cols; ++c) out.weights[static_cast<std::size_t>(c)] = w(c);
  out.bias = y_mean - x_mean.dot(w);
  return out;
}

/// Shot counts 2^e for e in [min_exp, max_exp] in steps of 1 / per_octave,
/// rounded to integers with duplicates removed.
inline std::vector<std::int64_t> log2_shots_grid(double min_exp, double max_exp, int per_octave = 1) {
  if (per_octave < 1 || max_exp < min_exp || min_exp < 0.0)
    throw std::invalid_argument("shots grid: bad exponent range");
  std::vector<std::int64_t> out;
  const int steps = static_cast<int>(std::floor((max_exp - min_exp) * per_octave + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    auto s = static_cast<std::int64_t>(std::llround(std::pow(2.0, min_exp + double(i) / per_octave)));
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  return out;
}

struct SweepPoint {
  std::int64_t shots = 0;
  double metric = 0.0;
  double standard_error = 0.0;
  long long trials = 0;
};

/// One series of a sweep: a metric against shots at fixed axis values.
struct SweepResult {
  enum class Metric { kAccuracy, kMse };
  Metric metric = Metric::kAccuracy;
  std::string series;
  int n_qubits = 0;
  double axis_value = 0.0;
  std::vector<SweepPoint> points;
};

/// Draws counts for a trial of class `label` with `shots` shots.
using ShotSource = std::function<ShotCounts(Label label, std::int64_t shots, RandomStream& rng)>;

/// Shot source that samples from fixed averaged outcome tables.
inline ShotSource table_source(ClassModel truth) {
  return [truth = std::move(truth)](Label l, std::int64_t s, RandomStream& rng) {
    return sample_counts(l == Label::kA ? truth.a : truth.b, s, rng);
  };
}

/// Shot source that redraws the parameters on every shot.
inline ShotSource per_shot_source(Protocol protocol, DistributionSpec dist_a, DistributionSpec dist_b) {
  return [=](Label l, std::int64_t s, RandomStream& rng) {
    return simulate_shots(protocol, l == Label::kA ? dist_a : dist_b, s, rng);
  };
}

using Classifier = std::function<Label(std::span<const double>, const ClassModel&)>;

/// Balanced classification accuracy against shots. Trial t of grid point g
/// uses child stream g * trials + t and class A when t is even. Trials run
/// in parallel; the count of correct trials is an integer, so the result does
/// not depend on the thread count.
inline SweepResult run_classification_sweep(const ShotSource& source, const ClassModel& model,
                                            const Classifier& classify,
                                            const std::vector<std::int64_t>& shots_grid,
                                            long long trials, const RandomStream& rng,
                                            int threads = 1) {
  model.validate();
  if (shots_grid.empty()) throw std::invalid_argument("sweep: empty shots grid");
  if (trials < 100) throw std::invalid_argument("sweep: trials must be >= 100");
  SweepResult out;
  out.metric = SweepResult::Metric::kAccuracy;
  for (std::size_t g = 0; g < shots_grid.size(); ++g) {
    const std::int64_t shots = shots_grid[g];
    std::vector<char> correct(static_cast<std::size_t>(trials), 0);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
      RandomStream s = rng.child(g * static_cast<std::uint64_t>(trials) + t);
      const Label truth = t % 2 == 0 ? Label::kA : Label::kB;
      ShotCounts c = source(truth, shots, s);
      correct[t] = classify(c.frequencies(), model) == truth;
    });
    long long hits = 0;
    for (char c : correct) hits += c;
    const double acc = static_cast<double>(hits) / static_cast<double>(trials);
    out.points.push_back({shots, acc, std::sqrt(acc * (1.0 - acc) / static_cast<double>(trials)), trials});
  }
  return out;
}

/// Estimation test set: true parameter values with the outcome tables that
/// generate shots for them.
struct EstimationCase {
  double value = 0.0;
  std::vector<double> probs;
};

/// Mean squared error of `estimator` against shots. Trial t draws its case
/// uniformly from `cases` using its own child stream.
inline SweepResult run_estimation_sweep(const std::vector<EstimationCase>& cases,
                                        const LinearEstimator& estimator,
                                        const std::vector<std::int64_t>& shots_grid,
                                        long long trials, const RandomStream& rng,
                                        int threads = 1) {
  if (cases.empty()) throw std::invalid_argument("sweep: no estimation cases");
  if (shots_grid.empty()) throw std::invalid_argument("sweep: empty shots grid");
  if (trials < 100) throw std::invalid_argument("sweep: trials must be >= 100");
  SweepResult out;
  out.metric = SweepResult::Metric::kMse;
  for (std::size_t g = 0; g < shots_grid.size(); ++g) {
    const std::int64_t shots = shots_grid[g];
    std::vector<double> sq(static_cast<std::size_t>(trials), 0.0);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
      RandomStream s = rng.child(g * static_cast<std::uint64_t>(trials) + t);
      const auto& cs = cases[static_cast<std::size_t>(s() % cases.size())];
      ShotCounts c = sample_counts(cs.probs, shots, s);
      const double err = estimator.predict(c.frequencies()) - cs.value;
      sq[t] = err * err;
    });
    double m = 0.0;
    for (double v : sq) m += v;
    m /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : sq) var += (v - m) * (v - m);
    var /= static_cast<double>(trials - 1);
    out.points.push_back({shots, m, std::sqrt(var / static_cast<double>(trials)), trials});
  }
  return out;
}

struct ShotsToTarget {
  double shots = std::numeric_limits<double>::quiet_NaN();
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool censored = true;
};

namespace inference_detail {

/// First crossing of `target` by metric + shift * stderr, interpolated
/// linearly in log2(shots) (and in log of the metric for MSE).
inline std::optional<double> crossing(const SweepResult& r, double target, double shift) {
  const bool acc = r.metric == SweepResult::Metric::kAccuracy;
  auto value = [&](const SweepPoint& p) { return p.metric + shift * p.standard_error; };
  auto meets = [&](double v) { return acc ? v >= target : v <= target; };
  auto tr = [&](double v) { return acc ? v : std::log(std::max(v, 1e-300)); };
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    if (!meets(value(r.points[i]))) continue;
    if (i == 0) return static_cast<double>(r.points[0].shots);
    const double x0 = std::log2(static_cast<double>(r.points[i - 1].shots));
    const double x1 = std::log2(static_cast<double>(r.points[i].shots));
    const double y0 = tr(value(r.points[i - 1])), y1 = tr(value(r.points[i]));
    const double yt = tr(target);
    const double f = y1 != y0 ? std::clamp((yt - y0) / (y1 - y0), 0.0, 1.0) : 1.0;
    return std::exp2(x0 + f * (x1 - x0));
  }
  return std::nullopt;
}

}  // namespace inference_detail

/// Shots needed to reach `target` (accuracy >= target, or MSE <= target).
/// The bracket [lower, upper] comes from shifting every point by one
/// standard error in each direction. Targets not met inside the grid are
/// censored rather than extrapolated.
inline ShotsToTarget shots_to_target(const SweepResult& r, double target) {
  ShotsToTarget out;
  if (r.points.empty()) return out;
  const double favourable = r.metric == SweepResult::Metric::kAccuracy ? 1.0 : -1.0;
  auto mid = inference_detail::crossing(r, target, 0.0);
  if (!mid) return out;
  out.censored = false;
  out.shots = *mid;
  auto lo = inference_detail::crossing(r, target, favourable);
  auto hi = inference_detail::crossing(r, target, -favourable);
  out.lower = lo ? std::min(*lo, out.shots) : out.shots;
  out.upper = hi ? std::max(*hi, out.shots) : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace stochsense
