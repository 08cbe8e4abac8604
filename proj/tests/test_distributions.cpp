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


#include "stochsense/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stochsense;

namespace {

// (1 - e^{-0.1}) e^{-1.5} from an independent double-precision evaluation.
constexpr double kGaussianCorner = 0.021233642153774431;

CorrelatedGaussianSpec example_gaussian(double off_diagonal) {
  Eigen::Matrix2d cov;
  cov << 1.0, off_diagonal, off_diagonal, 1.0;
  return CorrelatedGaussianSpec(Eigen::Vector2d(0.0, 0.0), cov);
}

}  // namespace

TEST(Sample, PointMassIsExact) {
  RandomStream rng(1);
  DistributionSpec d = PointMass{{0.1, -2.0}};
  EXPECT_EQ(sample(d, rng), (std::vector<double>{0.1, -2.0}));
}

TEST(Sample, ConstrainedUniformHitsConstraint) {
  RandomStream rng(2);
  ConstrainedUniformSpec s = ConstrainedUniformSpec::uniform_sum(4, 0.3);
  s.alpha = {0.5, -1.0, 1.0, 0.75};
  DistributionSpec d = s;
  for (int i = 0; i < 1000; ++i) {
    auto t = sample(d, rng);
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) sum += s.alpha[j] * t[j];
    ASSERT_NEAR(sum, 0.3, 1e-12);
    for (int j = 0; j < 3; ++j) {
      ASSERT_GE(t[j], 0.0);
      ASSERT_LT(t[j], kTwoPi);
    }
  }
}

TEST(Sample, UnitWeightsSumExactly) {
  RandomStream rng(3);
  DistributionSpec d = ConstrainedUniformSpec::uniform_sum(4, 0.3);
  for (int i = 0; i < 1000; ++i) {
    auto t = sample(d, rng);
    ASSERT_NEAR(t[0] + t[1] + t[2] + t[3], 0.3, 1e-12);
  }
}

TEST(Sample, GaussianCovariance) {
  RandomStream rng(4);
  const double s2 = 1.5 * 1.5, sc2 = 0.99 * s2;
  DistributionSpec d = CorrelatedGaussianSpec::pair(0.2, -0.1, s2, sc2);
  const int n = 1000000;
  double m1 = 0, m2 = 0, c11 = 0, c22 = 0, c12 = 0;
  for (int i = 0; i < n; ++i) {
    auto t = sample(d, rng);
    m1 += t[0];
    m2 += t[1];
    c11 += t[0] * t[0];
    c22 += t[1] * t[1];
    c12 += t[0] * t[1];
  }
  m1 /= n;
  m2 /= n;
  c11 = c11 / n - m1 * m1;
  c22 = c22 / n - m2 * m2;
  c12 = c12 / n - m1 * m2;
  EXPECT_NEAR(c11 / s2, 1.0, 0.01);
  EXPECT_NEAR(c22 / s2, 1.0, 0.01);
  EXPECT_NEAR(c12 / sc2, 1.0, 0.01);
}

TEST(Spec, GaussianRejectsNonPsd) {
  EXPECT_THROW(CorrelatedGaussianSpec::pair(0, 0, 1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(CorrelatedGaussianSpec::pair(0, 0, -1.0, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(CorrelatedGaussianSpec::pair(0, 0, 1.0, 1.0));
}

TEST(Spec, ConstrainedUniformValidation) {
  ConstrainedUniformSpec s = ConstrainedUniformSpec::uniform_sum(3, 0.1);
  s.alpha.back() = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.alpha = {1.5, 1.0, 1.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(CharacteristicFunction, ZeroIsOne) {
  std::vector<DistributionSpec> specs = {
      CorrelatedGaussianSpec::pair(0.3, 0.1, 0.5, 0.2),
      ConstrainedUniformSpec::uniform_sum(3, 0.4), PointMass{{1.0, 2.0}}};
  for (const auto& d : specs) {
    std::vector<double> k(static_cast<std::size_t>(n_params(d)), 0.0);
    EXPECT_EQ(characteristic_function(d, k), Complex(1.0, 0.0));
  }
}

TEST(CharacteristicFunction, ConstrainedUniformAllOnes) {
  for (int n : {2, 3, 5}) {
    DistributionSpec d = ConstrainedUniformSpec::uniform_sum(n, 0.3);
    std::vector<double> k(n, 1.0);
    Complex chi = characteristic_function(d, k);
    EXPECT_NEAR(std::abs(chi - std::polar(1.0, -0.3)), 0.0, 1e-12);
    // Integer k off the all-equal line averages to zero.
    k[0] = 2.0;
    EXPECT_NEAR(std::abs(characteristic_function(d, k)), 0.0, 1e-12);
  }
}

TEST(CharacteristicFunction, GaussianExampleDifference) {
  DistributionSpec a = example_gaussian(0.5), b = example_gaussian(0.6);
  std::vector<double> k = {1.0, 1.0};
  Complex diff = characteristic_function(a, k) - characteristic_function(b, k);
  EXPECT_NEAR(diff.real(), kGaussianCorner, 1e-15);
  EXPECT_NEAR(diff.imag(), 0.0, 1e-15);
}

TEST(CharacteristicFunction, PointMassPhase) {
  DistributionSpec d = PointMass{{0.4, -1.0}};
  std::vector<double> k = {2.0, 1.0};
  EXPECT_NEAR(std::abs(characteristic_function(d, k) - std::polar(1.0, 0.2)), 0.0, 1e-15);
  RandomStream rng(1);
  auto mc = characteristic_function_mc(d, k, 1, rng);
  EXPECT_EQ(mc.value, characteristic_function(d, k));
  EXPECT_EQ(mc.standard_error, 0.0);
}

TEST(CharacteristicFunction, XxzHasNoClosedForm) {
  XXZGibbsSpec x;
  x.params.n = 2;
  x.thetas = std::make_shared<std::vector<std::vector<double>>>(
      std::vector<std::vector<double>>{{0.1, -0.1}});
  DistributionSpec d = x;
  std::vector<double> k = {1.0, 1.0};
  EXPECT_THROW(characteristic_function(d, k), std::invalid_argument);
  EXPECT_NEAR(std::abs(empirical_characteristic_function(x, k) - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(CharacteristicFunction, ConjugateSymmetryAndBound) {
  ConstrainedUniformSpec cu = ConstrainedUniformSpec::uniform_sum(3, 0.7);
  cu.alpha = {0.5, -0.25, 1.0};
  cu.noise_sigma = 0.2;
  cu.interval_start = 0.3;
  cu.interval_width = 1.9;
  std::vector<DistributionSpec> specs = {CorrelatedGaussianSpec::pair(0.3, 0.1, 0.5, 0.2),
                                         DistributionSpec(cu)};
  RandomStream rng(9);
  for (const auto& d : specs) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> k(static_cast<std::size_t>(n_params(d))), nk(k.size());
      for (std::size_t j = 0; j < k.size(); ++j) {
        k[j] = rng.uniform(-3, 3);
        nk[j] = -k[j];
      }
      Complex c = characteristic_function(d, k);
      EXPECT_LE(std::abs(c), 1.0 + 1e-15);
      EXPECT_NEAR(std::abs(characteristic_function(d, nk) - std::conj(c)), 0.0, 1e-15);
    }
  }
}

TEST(CharacteristicFunction, McConstrainedUniformAllOnes) {
  RandomStream rng(31);
  DistributionSpec d = ConstrainedUniformSpec::uniform_sum(3, 0.3);
  std::vector<double> k = {1.0, 1.0, 1.0};
  auto mc = characteristic_function_mc(d, k, 1000000, rng);
  // Every sample gives exactly exp(-iC), so the estimate is exact.
  EXPECT_NEAR(std::abs(mc.value - std::polar(1.0, -0.3)), 0.0, 1e-9 + 3 * mc.standard_error);
}

// Analytic and Monte Carlo chi agree on the integer grid {-2..2}^n.
TEST(CharacteristicFunction, AnalyticMatchesMonteCarloOnGrid) {
  ConstrainedUniformSpec cu = ConstrainedUniformSpec::uniform_sum(3, 0.4);
  cu.noise_sigma = 0.3;
  cu.interval_width = 4.0;
  ConstrainedUniformSpec cu2 = ConstrainedUniformSpec::uniform_sum(2, -0.2);
  cu2.alpha = {0.5, 1.0};
  std::vector<DistributionSpec> specs = {CorrelatedGaussianSpec::pair(0.3, -0.2, 0.4, 0.3),
                                         DistributionSpec(cu), DistributionSpec(cu2)};
  int checked = 0;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const int n = n_params(specs[s]);
    const int total = static_cast<int>(std::pow(5, n));
    for (int idx = 0; idx < total; ++idx) {
      std::vector<double> k(n);
      for (int j = 0, r = idx; j < n; ++j, r /= 5) k[j] = (r % 5) - 2;
      RandomStream rng = RandomStream(101).child(s * 1000 + idx);
      auto mc = characteristic_function_mc(specs[s], k, 20000, rng);
      Complex exact = characteristic_function(specs[s], k);
      // Per-component standard errors are at most the complex one.
      EXPECT_LE(std::abs(mc.value.real() - exact.real()), 4 * mc.standard_error + 1e-12);
      EXPECT_LE(std::abs(mc.value.imag() - exact.imag()), 4 * mc.standard_error + 1e-12);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 25 + 125 + 25);
}

TEST(AveragedDensity, PointMassIsPure) {
  RandomStream rng(1);
  DistributionSpec d = PointMass{{0.3, 1.1}};
  DensityMatrix rho = averaged_density(StateVector::plus(2), d, EigenvalueMap::local_z(2), 4, rng);
  EXPECT_TRUE(rho.is_valid(1e-12));
  EXPECT_NEAR((rho.matrix() * rho.matrix()).trace().real(), 1.0, 1e-12);
}

TEST(AveragedDensity, SingleCopyLineIsDiagonal) {
  RandomStream rng(1);
  for (double phi : {0.0, 0.4, 1.3, 2.9}) {
    DistributionSpec d = UniformLineSpec{{2.0, 1.0}, {0.0, phi}};
    for (int n_grid : {7, 16}) {
      CVector v(4);
      v << 0.3, Complex(0.1, 0.5), -0.4, Complex(0.2, -0.7);
      DensityMatrix rho = averaged_density(StateVector::from_amplitudes(v), d,
                                           EigenvalueMap::local_z(2), n_grid, rng);
      EXPECT_LT(rho.max_off_diagonal(), 1e-12);
      EXPECT_TRUE(rho.is_valid(1e-12));
    }
  }
}

TEST(AveragedDensity, BellUnderGaussianMatchesClosedForm) {
  // Bell probe, halved phases: qubit 0 reads cos^2((x0 - x1)/2) after decode,
  // so E[P] = 1/2 + 1/2 exp(-sigma_-^2) cos(mean difference).
  RandomStream rng(12);
  const double s2 = 0.8, sc2 = 0.5, m1 = 0.4, m2 = -0.1;
  DistributionSpec d = CorrelatedGaussianSpec::pair(m1, m2, s2, sc2);
  const int n = 200000;
  DensityMatrix rho = averaged_density(StateVector::bell(), d, EigenvalueMap::halved_z(2), n, rng);
  EXPECT_TRUE(rho.is_valid(1e-10));
  // <Psi+| rho |Psi+> is the decoded excitation probability.
  const CVector bell = StateVector::bell().amplitudes();
  const double p = (bell.adjoint() * rho.matrix() * bell)(0, 0).real();
  const double want = 0.5 + 0.5 * std::exp(-(s2 - sc2)) * std::cos(m1 - m2);
  EXPECT_NEAR(p, want, 4.0 * 0.5 / std::sqrt(n));
}
