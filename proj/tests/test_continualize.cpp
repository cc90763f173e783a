// Copyright 2026 The DIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dip/continualize.hpp"
#include "dip/univariate.hpp"
#include "oracles.hpp"

namespace dip {
namespace {

TEST(ContinualizedEdf, ThreePointExample) {
  const ContinualizedCdf c = continualized_edf({5.0, 2.0, 9.0});
  EXPECT_EQ(c.knots(), (std::vector<double>{1.0, 2.0, 5.0, 9.0}));
  EXPECT_NEAR(c.evaluate(3.5), 0.5, 1e-15);
  EXPECT_NEAR(c.inverse(0.5), 3.5, 1e-12);
  // Zero noise leaves the median fixed for any budget.
  for (double eps : {0.1, 1.0, 10.0}) {
    FixedDraws draws{0.0, 0.0};
    EXPECT_NEAR(privatize_value(c, 3.5, LaplaceScale::for_epsilon(eps), draws), 3.5, 1e-12);
  }
}

TEST(ContinualizedEdf, ClampsOutsideTheKnots) {
  const ContinualizedCdf c = continualized_edf({5.0, 2.0, 9.0});
  EXPECT_EQ(c.evaluate(0.0), 0.0);
  EXPECT_EQ(c.evaluate(1.0), 0.0);
  EXPECT_EQ(c.evaluate(100.0), 1.0);
  EXPECT_GT(c.inverse(0.0), 1.0);
  EXPECT_LT(c.inverse(0.0), 1.0 + 1e-9);
  EXPECT_EQ(c.inverse(1.0), 9.0);
  EXPECT_EQ(c.inverse(2.0), 9.0);
}

TEST(ContinualizedEdf, InverseRoundTrip) {
  RandomStream rng(3);
  std::vector<double> h(500);
  for (auto& v : h) v = rng.normal();
  const ContinualizedCdf c = continualized_edf(h);
  for (int k = 1; k < 1000; ++k) {
    const double u = k / 1000.0;
    EXPECT_NEAR(c.evaluate(c.inverse(u)), u, 1e-12);
  }
}

TEST(StrictOrderStatistics, SeparatesTiesStably) {
  const auto [sorted, order] = strict_order_statistics({3.0, 1.0, 3.0});
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_EQ(sorted[0], 1.0);
  EXPECT_EQ(sorted[1], 3.0);
  EXPECT_GT(sorted[2], 3.0);
  EXPECT_LT(sorted[2], 3.0 + 1e-8);
}

TEST(GeneralizedCeiling, MapsUpToTheNextSupportPoint) {
  const GeneralizedCeiling g({0.0, 1.0, 3.0});
  EXPECT_EQ(g(-7.0), 0.0);
  EXPECT_EQ(g(0.0), 0.0);
  EXPECT_EQ(g(0.2), 1.0);
  EXPECT_EQ(g(2.5), 3.0);
  EXPECT_EQ(g(3.0), 3.0);
  EXPECT_THROW(g(3.5), std::invalid_argument);
  EXPECT_NEAR(g.continualize(3.0, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(g.continualize(0.0, 0.5), -0.5, 1e-15);
  EXPECT_THROW(g.continualize(2.0, 0.5), DataError);
  EXPECT_THROW(GeneralizedCeiling({1.0, 1.0}), std::invalid_argument);
}

TEST(GeneralizedCeiling, CeilingUndoesContinualization) {
  const GeneralizedCeiling g({-2.0, 0.0, 0.5, 4.0});
  for (double z : g.support()) {
    for (double u : {0.0, 0.25, 0.999999}) EXPECT_EQ(g(g.continualize(z, u)), z);
  }
}

TEST(ContinualizeDiscrete, BernoulliKnots) {
  const auto c = continualize_discrete(jump_spec(ParametricDistribution::bernoulli(0.3)));
  EXPECT_EQ(c.knots(), (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_NEAR(c.values()[1], 0.7, 1e-15);
  EXPECT_NEAR(c.evaluate(-0.5), 0.35, 1e-15);
  EXPECT_EQ(c.ceiling(c.inverse(0.69)), 0.0);
  EXPECT_EQ(c.ceiling(c.inverse(0.71)), 1.0);
  EXPECT_THROW(jump_spec(ParametricDistribution::poisson(2)), std::invalid_argument);
}

TEST(ContinualizeDiscrete, ContinualizedVariableHasTheContinualizedLaw) {
  const auto dist = ParametricDistribution::binomial(5, 0.5);
  const JumpSpec spec = jump_spec(dist);
  const auto c = continualize_discrete(spec);
  RandomStream rng(11);
  std::vector<double> v(200000);
  for (auto& x : v) {
    const double z = dist.sample_one(rng);
    x = continualize_value(z, spec, rng);
  }
  // Reference: mass P_k spread uniformly over (k - 1, k].
  const auto ref = [&](double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 5.0) return 1.0;
    const double k = std::ceil(x);
    return dist.cdf(k - 1.0) + dist.pmf(k) * (x - (k - 1.0));
  };
  EXPECT_LE(oracle::ks_one_sample(v, ref), 1.63 / std::sqrt(200000.0));
  for (double x = -0.9; x < 5.0; x += 0.1) EXPECT_NEAR(c.evaluate(x), ref(x), 1e-14);
}

TEST(MixedCeiling, UnitIntervalsPerJump) {
  const MixedCeiling l0({-1.0, 0.0, 2.0});
  // Jumps own [-3,-2], [-1,0] and [2,3]; continuous stretches shift with them.
  EXPECT_NEAR(l0.continualize(-1.0, 0.5), -2.5, 1e-15);
  EXPECT_NEAR(l0.continualize(0.0, 0.5), -0.5, 1e-15);
  EXPECT_NEAR(l0.continualize(2.0, 0.5), 2.5, 1e-15);
  EXPECT_NEAR(l0.continualize(-5.0, 0.5), -7.0, 1e-15);
  EXPECT_NEAR(l0.continualize(-0.5, 0.5), -1.5, 1e-15);
  EXPECT_NEAR(l0.continualize(1.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(l0.continualize(5.0, 0.5), 6.0, 1e-15);
  for (double z : {-5.0, -1.0, -0.5, 0.0, 1.0, 2.0, 5.0}) {
    for (double u : {0.0, 0.3, 0.99}) EXPECT_NEAR(l0(l0.continualize(z, u)), z, 1e-12) << z;
  }
}

TEST(ContinualizedMixedCdf, ContinuousIncreasingAndInvertible) {
  MixedDistribution mix;
  mix.jumps = JumpSpec{{0.0}, {0.3}};
  mix.continuous.push_back({0.7, ParametricDistribution::normal(0, 1)});
  const ContinualizedMixedCdf c(mix);
  EXPECT_NEAR(c.evaluate(-1.0), 0.35, 1e-12);
  EXPECT_NEAR(c.evaluate(-0.5), 0.5, 1e-12);
  EXPECT_NEAR(c.evaluate(0.0), 0.65, 1e-12);
  EXPECT_NEAR(c.evaluate(-1.0 - 1e-9), 0.35, 1e-8);
  EXPECT_NEAR(c.evaluate(1e-9), 0.65, 1e-8);
  double prev = 0.0;
  for (double v = -6.0; v < 6.0; v += 0.05) {
    const double f = c.evaluate(v);
    EXPECT_GE(f, prev);
    prev = f;
    if (f > 1e-6 && f < 1 - 1e-6) EXPECT_NEAR(c.inverse(f), v, 1e-8) << v;
  }
  EXPECT_EQ(c.ceiling(-0.4), 0.0);
  EXPECT_NEAR(c.ceiling(-2.0), -1.0, 1e-15);
}

TEST(ContinualizedMixedCdf, RejectsValuesOutsideTheSupport) {
  MixedDistribution mix;
  mix.jumps = JumpSpec{{0.0}, {0.5}};
  mix.continuous.push_back({0.5, ParametricDistribution::uniform(1, 2)});
  const ContinualizedMixedCdf c(mix);
  EXPECT_THROW(c.continualize(0.5, 0.1), DataError);
  EXPECT_NO_THROW(c.continualize(1.5, 0.1));
}

TEST(MixedDistribution, RejectsBadMass) {
  MixedDistribution mix;
  mix.jumps = JumpSpec{{0.0}, {0.5}};
  mix.continuous.push_back({0.6, ParametricDistribution::normal(0, 1)});
  EXPECT_THROW(ContinualizedMixedCdf{mix}, std::invalid_argument);
}

}  // namespace
}  // namespace dip
