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


#include "stochsense/featmat.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace stochsense;

namespace {

FeatureMatrix uniform_task(int n, double c) {
  return build_feature_matrix(analytic_chi(ConstrainedUniformSpec::uniform_sum(n, c)),
                              analytic_chi(ConstrainedUniformSpec::uniform_sum(n, -c)),
                              EigenvalueMap::local_z(n));
}

CorrelatedGaussianSpec zero_mean(double corr) { return CorrelatedGaussianSpec::pair(0, 0, 1.0, corr); }

// (1 - e^{-0.1 k1 k2}) e^{-(k1^2 + k1 k2 + k2^2)/2}
double gaussian_difference(double k1, double k2) {
  return (1 - std::exp(-0.1 * k1 * k2)) * std::exp(-0.5 * (k1 * k1 + k1 * k2 + k2 * k2));
}

CVector random_state(int d, RandomStream& rng) {
  CVector v(d);
  for (auto& x : v) x = Complex(rng.normal(), rng.normal());
  return v.normalized();
}

CMatrix random_projector(int d, int rank, RandomStream& rng) {
  CMatrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, rank);
  return q * q.adjoint();
}

// Tr(O U(theta) rho U(theta)^dagger) with U|a> = exp(-i q(a).theta)|a>.
double outcome_probability(const CMatrix& rho, const CMatrix& o, const EigenvalueMap& map,
                           const std::vector<double>& theta) {
  const auto d = rho.rows();
  CVector ph(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    double s = 0;
    for (int j = 0; j < map.n_params(); ++j) s += map.q(static_cast<std::size_t>(a), j) * theta[j];
    ph(a) = std::polar(1.0, -s);
  }
  const CMatrix rt = ph.asDiagonal() * rho * ph.conjugate().asDiagonal();
  return (o * rt).trace().real();
}

}  // namespace

TEST(FeatureMatrixTest, IdenticalClassesGiveZero) {
  auto chi = analytic_chi(zero_mean(0.5));
  auto f = build_feature_matrix(chi, chi, EigenvalueMap::local_z(2));
  EXPECT_EQ(f.entries.cwiseAbs().maxCoeff(), 0.0);
  auto r = theorem_bound_report(f);
  EXPECT_EQ(r.product_bound, 0.0);
  EXPECT_TRUE(std::isinf(r.shots_90));
}

TEST(FeatureMatrixTest, HermitianWithZeroDiagonal) {
  auto f = build_feature_matrix(analytic_chi(CorrelatedGaussianSpec::pair(0.3, -0.2, 1.0, 0.5)),
                                analytic_chi(zero_mean(0.6)), EigenvalueMap::halved_z(2));
  EXPECT_LT((f.entries - f.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(f.entries.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(FeatureMatrixTest, ConstrainedUniformHasOnlyTheCorner) {
  for (int n : {2, 3, 4, 5}) {
    for (double c : {0.3, 1.1, -0.7}) {
      auto f = uniform_task(n, c);
      const auto d = f.entries.rows();
      int nonzero = 0;
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
          if (std::abs(f.entries(a, b)) > 1e-12) ++nonzero;
      EXPECT_EQ(nonzero, 2);
      EXPECT_NEAR(std::abs(f.entries(0, d - 1) - Complex(0, 2 * std::sin(c))), 0.0, 1e-12);
    }
  }
}

TEST(FeatureMatrixTest, GaussianEntangledMapMatchesClosedForm) {
  auto f = build_feature_matrix(analytic_chi(zero_mean(0.5)), analytic_chi(zero_mean(0.6)),
                                EigenvalueMap::entangling_zz(2));
  // lambda(a) = (a1 a2, a2).
  const double lam[4][2] = {{0, 0}, {0, 1}, {0, 0}, {1, 1}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double v = gaussian_difference(lam[a][0] - lam[b][0], lam[a][1] - lam[b][1]);
      EXPECT_NEAR(f(a, b).real(), v, 1e-15);
      EXPECT_NEAR(f(a, b).imag(), 0.0, 1e-15);
    }
  const double corner = 0.021233642153774431;
  EXPECT_NEAR(f(0, 3).real(), corner, 1e-15);
  // |10> and |11> share this difference vector with |00> and |11>.
  EXPECT_NEAR(f(2, 3).real(), corner, 1e-15);
  EXPECT_NEAR(f(3, 2).real(), corner, 1e-15);
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}, {1, 3}})
    EXPECT_EQ(std::abs(f(a, b)), 0.0);
}

TEST(FeatureMatrixTest, GaussianLocalMapMatchesReferenceMatrix) {
  auto f = build_feature_matrix(analytic_chi(zero_mean(0.5)), analytic_chi(zero_mean(0.6)),
                                EigenvalueMap::local_z(2));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = 0.021233642153774431;
  expected(1, 2) = expected(2, 1) = -0.063789386323005931;
  EXPECT_LT((f.entries - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FeatureMatrixTest, SampledChiAgreesWithAnalytic) {
  RandomStream rng(11);
  auto spec = CorrelatedGaussianSpec::pair(0.2, -0.1, 0.7, 0.3);
  auto s = sampled_chi(spec, 200000, rng);
  auto a = analytic_chi(spec);
  for (auto k : {std::vector<double>{1, -1}, {1, 1}, {0, 1}, {2, -1}}) {
    // Each part of a mean of unit phasors has standard error <= 1/sqrt(2n).
    EXPECT_LT(std::abs(s(k) - a(k)), 5 * std::sqrt(2.0 / 200000));
  }
}

TEST(FeatureMatrixTest, TooManyQubitsIsResourceCap) {
  auto chi = analytic_chi(zero_mean(0.5));
  EXPECT_THROW(build_feature_matrix(chi, chi, EigenvalueMap::local_z(kMaxFeatureQubits + 1)),
               ResourceCapError);
}

TEST(SeparationTest, DiagonalProbeSeesNothing) {
  auto f = uniform_task(2, 0.4);
  CMatrix rho = CMatrix::Zero(4, 4);
  rho.diagonal() << 0.1, 0.2, 0.3, 0.4;
  ProbeObservablePair p{DensityMatrix(rho), CMatrix::Identity(4, 4)};
  EXPECT_EQ(separation_value(p, f), 0.0);
}

TEST(SeparationTest, OptimalPairReachesSinC) {
  for (int n : {2, 3, 4}) {
    for (double c : {0.3, -0.8, 1.3}) {
      auto f = uniform_task(n, c);
      auto pair = optimal_sparse_pair(f);
      pair.validate();
      EXPECT_NEAR(std::abs(separation_value(pair, f)), std::abs(std::sin(c)), 1e-12);
    }
  }
}

TEST(SeparationTest, RandomPairsDoNotBeatTheOptimum) {
  RandomStream rng(21);
  auto f = uniform_task(3, 0.5);
  const double best = std::abs(std::sin(0.5));
  for (int t = 0; t < 300; ++t) {
    ProbeObservablePair p{DensityMatrix::pure(StateVector::from_amplitudes(random_state(8, rng))),
                          random_projector(8, 1 + t % 7, rng)};
    EXPECT_LE(std::abs(separation_value(p, f)), best + 1e-12);
  }
}

TEST(SeparationTest, AmbiguousMatrixThrows) {
  auto f = build_feature_matrix(analytic_chi(zero_mean(0.5)), analytic_chi(zero_mean(0.6)),
                                EigenvalueMap::entangling_zz(2));
  EXPECT_THROW(optimal_sparse_pair(f), AmbiguousPairError);
}

TEST(SeparationTest, MatchesMonteCarloProbabilityDifference) {
  RandomStream rng(31);
  const int n_samples = 40000;
  for (int inst = 0; inst < 6; ++inst) {
    const int n = 2 + inst % 2;
    DistributionSpec a = ConstrainedUniformSpec::uniform_sum(n, 0.2 + 0.2 * inst);
    DistributionSpec b = ConstrainedUniformSpec::uniform_sum(n, -0.1 * inst);
    if (n == 2 && inst % 4 == 0) {
      a = CorrelatedGaussianSpec::pair(0.1, 0.4, 0.8, 0.5);
      b = CorrelatedGaussianSpec::pair(-0.2, 0.0, 0.6, -0.1);
    }
    auto map = EigenvalueMap::local_z(n);
    auto f = build_feature_matrix(analytic_chi(a), analytic_chi(b), map);
    const int d = 1 << n;
    const CMatrix rho = DensityMatrix::pure(StateVector::from_amplitudes(random_state(d, rng))).matrix();
    const CMatrix o = random_projector(d, 1 + inst % (d - 1), rng);
    const double delta = separation_value({DensityMatrix(rho), o}, f);
    double ma = 0, va = 0, mb = 0, vb = 0;
    for (int s = 0; s < n_samples; ++s) {
      const double pa = outcome_probability(rho, o, map, sample(a, rng));
      const double pb = outcome_probability(rho, o, map, sample(b, rng));
      ma += pa;
      va += pa * pa;
      mb += pb;
      vb += pb * pb;
    }
    ma /= n_samples;
    mb /= n_samples;
    const double se = std::sqrt((va / n_samples - ma * ma + vb / n_samples - mb * mb) / n_samples);
    EXPECT_NEAR(delta, ma - mb, 4 * se) << "instance " << inst;
  }
}

TEST(ProductSearchTest, ConstrainedUniformReachesHalvingPerQubit) {
  for (int n : {2, 3}) {
    const double c = 0.3;
    auto f = uniform_task(n, c);
    ProductSearchSettings s;
    s.seed = 5;
    auto r = best_product_separation(f, s);
    const double target = std::sin(c) / std::exp2(n - 1);
    EXPECT_TRUE(r.is_lower_bound);
    EXPECT_NEAR(r.value, target, 0.02 * target) << n;
    EXPECT_LE(r.value, std::abs(std::sin(c)) + 1e-12);
    r.pair.validate();
    EXPECT_NEAR(std::abs(separation_value(r.pair, f)), r.value, 1e-9);
  }
}

TEST(ProductSearchTest, ThreadIndependent) {
  auto f = uniform_task(2, 0.7);
  ProductSearchSettings s;
  s.seed = 3;
  s.threads = 1;
  auto one = best_product_separation(f, s);
  s.threads = 3;
  auto three = best_product_separation(f, s);
  EXPECT_EQ(one.value, three.value);
}

TEST(ProductSearchTest, HadamardParityPair) {
  for (int n : {2, 3, 4, 5}) {
    for (double c : {0.3, -1.0}) {
      auto f = uniform_task(n, c);
      auto p = hadamard_parity_pair(f);
      p.validate();
      EXPECT_NEAR(std::abs(separation_value(p, f)), std::abs(std::sin(c)) / std::exp2(n - 1), 1e-12);
    }
  }
}

TEST(BoundReportTest, ConstrainedUniform) {
  const int n = 4;
  const double c = 0.3;
  auto f = uniform_task(n, c);
  const double delta = std::sin(c) / 8;
  auto r = theorem_bound_report(f, delta);
  ASSERT_EQ(r.rms.size(), 5u);
  for (int h = 0; h < n; ++h) EXPECT_LT(r.rms[h], 1e-12);
  long long total = 0;
  for (int h = 0; h <= n; ++h) {
    EXPECT_EQ(r.pairs[h], static_cast<long long>(binomial(n, h) * 16));
    total += r.pairs[h];
  }
  EXPECT_EQ(total, 256);
  // Two nonzero entries among 2^N ordered pairs at distance N.
  EXPECT_NEAR(r.rms[n], 2 * std::sin(c) * std::exp2((1.0 - n) / 2), 1e-12);
  EXPECT_NEAR(r.product_bound, r.rms[n], 1e-12);
  EXPECT_NEAR(r.mean_bound_total, 2 * std::sin(c) * 2 / 16, 1e-12);
  EXPECT_NEAR(r.shots_90, kZ90 * kZ90 / (4 * delta * delta), 1e-9);
  EXPECT_GE(r.product_bound, delta);
}

TEST(BoundReportTest, CsvLayout) {
  auto f = uniform_task(2, 0.3);
  std::ostringstream os;
  write_feature_matrix_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "a,b,re_F,im_F");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 16);
}
