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


#include "stochsense/inference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace stochsense;

namespace {

ClassModel two_tables() { return {{0.1, 0.2, 0.3, 0.4}, {0.25, 0.25, 0.25, 0.25}}; }

}  // namespace

TEST(Fisher, Examples) {
  EXPECT_EQ(fisher_discriminant(0.3, 0.3, 0.1, 0.2), 0.0);
  EXPECT_NEAR(fisher_discriminant(1.0, 0.0, 0.5, 1.5), 1.0, 1e-15);
  EXPECT_THROW(fisher_discriminant(1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(Fisher, AffineInvariant) {
  const double d = fisher_discriminant(0.7, 0.2, 0.03, 0.05);
  for (double a : {-3.0, 0.5, 10.0}) {
    const double b = 1.7;
    EXPECT_NEAR(fisher_discriminant(a * 0.7 + b, a * 0.2 + b, a * a * 0.03, a * a * 0.05), d, 1e-12);
  }
}

TEST(Classify, CentroidsAndTies) {
  ClassModel m = two_tables();
  EXPECT_EQ(mle_classify(m.a, m), Label::kA);
  EXPECT_EQ(mle_classify(m.b, m), Label::kB);
  EXPECT_EQ(tvd_classify(m.b, m), Label::kB);
  EXPECT_EQ(tvd_classify(m.a, m), Label::kA);
  std::vector<double> mid(4);
  for (int k = 0; k < 4; ++k) mid[k] = 0.5 * (m.a[k] + m.b[k]);
  EXPECT_EQ(mle_classify(mid, m), Label::kA);
  EXPECT_EQ(tvd_classify(mid, m), Label::kA);
}

TEST(Classify, RejectsUnnormalizedObservation) {
  ClassModel m = two_tables();
  std::vector<double> bad = {0.5, 0.5, 0.5, 0.0};
  EXPECT_THROW(mle_classify(bad, m), std::invalid_argument);
  std::vector<double> short_obs = {1.0};
  EXPECT_THROW(tvd_classify(short_obs, m), std::invalid_argument);
}

// No subset of outcomes has equal mass under both tables, so the TVD
// comparison has no exact ties on open regions.
TEST(Classify, PermutationConsistent) {
  RandomStream rng(3);
  ClassModel m{{0.1, 0.2, 0.3, 0.4}, {0.22, 0.31, 0.17, 0.30}};
  std::vector<std::size_t> perm = {2, 0, 3, 1};
  for (int t = 0; t < 200; ++t) {
    std::vector<double> w(4);
    double s = 0;
    for (double& v : w) s += (v = rng.uniform());
    for (double& v : w) v /= s;
    ClassModel pm{{}, {}};
    std::vector<double> pw;
    for (std::size_t k : perm) {
      pm.a.push_back(m.a[k]);
      pm.b.push_back(m.b[k]);
      pw.push_back(w[k]);
    }
    EXPECT_EQ(mle_classify(w, m), mle_classify(pw, pm));
    EXPECT_EQ(tvd_classify(w, m), tvd_classify(pw, pm));
  }
}

TEST(TotalVariation, Range) {
  std::vector<double> p = {0.2, 0.8}, q = {1.0, 0.0};
  EXPECT_EQ(total_variation(p, p), 0.0);
  EXPECT_NEAR(total_variation(p, q), 0.8, 1e-15);
  std::vector<double> r = {0.0, 1.0};
  EXPECT_NEAR(total_variation(q, r), 1.0, 1e-15);
}

TEST(LinearEstimatorTest, ConstantTarget) {
  auto e = train_linear_estimator({{0.1, 0.9}, {0.4, 0.6}, {0.3, 0.7}}, {0.5, 0.5, 0.5});
  EXPECT_EQ(e.weights, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(e.bias, 0.5);
  EXPECT_TRUE(e.rank_deficient);
}

TEST(LinearEstimatorTest, RecoversLinearMapAndNormalEquations) {
  RandomStream rng(5);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> row = {rng.uniform(), rng.uniform(), rng.uniform()};
    x.push_back(row);
    y.push_back(0.3 + 2 * row[0] - row[1] + 0.5 * row[2] + 0.01 * rng.normal());
  }
  auto e = train_linear_estimator(x, y);
  EXPECT_FALSE(e.rank_deficient);
  EXPECT_NEAR(e.weights[0], 2.0, 0.05);
  EXPECT_NEAR(e.weights[1], -1.0, 0.05);
  // Residuals orthogonal to every design column, including the bias column.
  std::vector<double> dot(4, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - e.predict(x[i]);
    for (int c = 0; c < 3; ++c) dot[c] += r * x[i][c];
    dot[3] += r;
    scale += std::abs(y[i]);
  }
  for (double d : dot) EXPECT_LT(std::abs(d), 1e-8 * scale);
}

// On the GHZ readout (p0, p1) = ((1 - sin C)/2, (1 + sin C)/2) the centred
// design has rank one; the minimum-norm fit predicts about 2 p1 - 1 = sin C.
TEST(LinearEstimatorTest, GhzSingleQubitInversion) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i <= 20; ++i) {
    const double c = -0.05 + 0.005 * i;
    x.push_back({0.5 * (1 - std::sin(c)), 0.5 * (1 + std::sin(c))});
    y.push_back(c);
  }
  auto e = train_linear_estimator(x, y);
  EXPECT_TRUE(e.rank_deficient);
  EXPECT_NEAR(e.weights[1] - e.weights[0], 2.0, 1e-3);
  EXPECT_NEAR(e.weights[0], -e.weights[1], 1e-9);
  for (double p1 : {0.49, 0.5, 0.51}) {
    std::vector<double> obs = {1 - p1, p1};
    EXPECT_NEAR(e.predict(obs), 2 * p1 - 1, 1e-4);
  }
}

TEST(ShotsGrid, LogSpaced) {
  EXPECT_EQ(log2_shots_grid(1, 5), (std::vector<std::int64_t>{2, 4, 8, 16, 32}));
  auto g = log2_shots_grid(0, 2, 2);
  EXPECT_EQ(g, (std::vector<std::int64_t>{1, 2, 3, 4}));
  EXPECT_THROW(log2_shots_grid(3, 1), std::invalid_argument);
}

TEST(Sweep, AccuracyApproachesOneAndIsThreadIndependent) {
  ClassModel m = two_tables();
  auto grid = log2_shots_grid(1, 11);
  auto one = run_classification_sweep(table_source(m), m, mle_classify, grid, 400, RandomStream(3), 1);
  auto four = run_classification_sweep(table_source(m), m, mle_classify, grid, 400, RandomStream(3), 4);
  ASSERT_EQ(one.points.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(one.points[i].metric, four.points[i].metric);
    EXPECT_GE(one.points[i].metric, 0.0);
    EXPECT_LE(one.points[i].metric, 1.0);
    EXPECT_GE(one.points[i].standard_error, 0.0);
  }
  EXPECT_EQ(one.points.back().metric, 1.0);
  EXPECT_THROW(run_classification_sweep(table_source(m), m, mle_classify, grid, 50, RandomStream(3)),
               std::invalid_argument);
}

TEST(Sweep, ConstrainedUniformTvdBecomesCertain) {
  const int n = 3;
  Protocol p = Protocol::product(n, ghz_offset_and_product_offsets(n).product_nu);
  ClassModel m{grid_averaged_probs(p, ConstrainedUniformSpec::uniform_sum(n, 0.3)),
               grid_averaged_probs(p, ConstrainedUniformSpec::uniform_sum(n, -0.3))};
  auto r = run_classification_sweep(table_source(m), m, tvd_classify, {16, 256, 4096, 65536}, 200,
                                    RandomStream(2));
  for (std::size_t i = 1; i < r.points.size(); ++i)
    EXPECT_GE(r.points[i].metric + 3 * r.points[i].standard_error + 1e-12, r.points[i - 1].metric);
  EXPECT_GE(r.points.back().metric, 0.99);
}

TEST(Sweep, PerShotSourceMatchesTableSource) {
  // Per-shot redraws and table sampling give the same count distribution;
  // compare accuracies within a few standard errors.
  DistributionSpec a = CorrelatedGaussianSpec::pair(0.125, -0.125, 0.5, 0.4);
  DistributionSpec b = CorrelatedGaussianSpec::pair(-0.125, 0.125, 0.5, 0.4);
  Protocol p = Protocol::bell();
  ClassModel m{averaged_probs(p, a, {}, RandomStream(1)).probs,
               averaged_probs(p, b, {}, RandomStream(2)).probs};
  auto t = run_classification_sweep(table_source(m), m, mle_classify, {20}, 2000, RandomStream(5));
  auto s = run_classification_sweep(per_shot_source(p, a, b), m, mle_classify, {20}, 2000,
                                    RandomStream(6));
  const double se = std::hypot(t.points[0].standard_error, s.points[0].standard_error);
  EXPECT_NEAR(t.points[0].metric, s.points[0].metric, 4 * se);
}

TEST(Sweep, EstimationMseFallsWithShots) {
  std::vector<EstimationCase> cases;
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i <= 10; ++i) {
    const double c = -0.1 + 0.02 * i;
    std::vector<double> probs = {0.5 * (1 - std::sin(c)), 0.5 * (1 + std::sin(c))};
    cases.push_back({c, probs});
    x.push_back(probs);
    y.push_back(c);
  }
  auto est = train_linear_estimator(x, y);
  auto r = run_estimation_sweep(cases, est, {16, 256, 4096}, 500, RandomStream(4));
  EXPECT_GT(r.points[0].metric, r.points[1].metric);
  EXPECT_GT(r.points[1].metric, r.points[2].metric);
  // Shot noise of sin C estimated from a binomial: about 1 / S.
  EXPECT_NEAR(r.points[2].metric * 4096, 1.0, 0.2);
  auto again = run_estimation_sweep(cases, est, {16, 256, 4096}, 500, RandomStream(4), 3);
  EXPECT_EQ(r.points[2].metric, again.points[2].metric);
}

TEST(ShotsToTargetTest, InterpolatesAndCensors) {
  SweepResult r;
  r.metric = SweepResult::Metric::kAccuracy;
  r.points = {{2, 0.6, 0.01, 1000}, {4, 0.8, 0.01, 1000}, {8, 0.9, 0.01, 1000}, {16, 0.99, 0.01, 1000}};
  auto t = shots_to_target(r, 0.95);
  ASSERT_FALSE(t.censored);
  // Linear in log2: 3 + (0.05 / 0.09) between 8 and 16.
  EXPECT_NEAR(t.shots, std::exp2(3.0 + 0.05 / 0.09), 1e-9);
  EXPECT_LE(t.lower, t.shots);
  EXPECT_GE(t.upper, t.shots);
  EXPECT_TRUE(shots_to_target(r, 0.999).censored);
  EXPECT_EQ(shots_to_target(r, 0.5).shots, 2.0);
}

TEST(ShotsToTargetTest, StricterTargetNeedsMoreShots) {
  ClassModel m = two_tables();
  auto r = run_classification_sweep(table_source(m), m, mle_classify, log2_shots_grid(1, 10, 2), 400,
                                    RandomStream(8));
  double prev = 0.0;
  for (double target : {0.6, 0.7, 0.8, 0.9, 0.95}) {
    auto t = shots_to_target(r, target);
    if (t.censored) break;
    EXPECT_GE(t.shots, prev);
    prev = t.shots;
  }
  SweepResult mse;
  mse.metric = SweepResult::Metric::kMse;
  mse.points = {{10, 1e-2, 1e-3, 100}, {100, 1e-3, 1e-4, 100}, {1000, 1e-4, 1e-5, 100}};
  EXPECT_NEAR(shots_to_target(mse, 1e-3).shots, 100.0, 1e-9);
  EXPECT_NEAR(shots_to_target(mse, std::sqrt(1e-3 * 1e-4)).shots, std::sqrt(100.0 * 1000.0), 1e-6);
  EXPECT_GT(shots_to_target(mse, 2e-4).shots, shots_to_target(mse, 5e-4).shots);
}
