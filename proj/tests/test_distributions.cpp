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

#include "dip/distributions.hpp"
#include "oracles.hpp"

namespace dip {
namespace {

TEST(Distributions, CdfReferenceValues) {
  EXPECT_NEAR(ParametricDistribution::exponential(1.0).cdf(std::log(2.0)), 0.5, 1e-15);
  EXPECT_NEAR(ParametricDistribution::normal(0, 1).cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(ParametricDistribution::bernoulli(0.1).cdf(0.0), 0.9, 1e-15);
  EXPECT_NEAR(ParametricDistribution::uniform(0, 1).cdf(0.25), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(ParametricDistribution::bernoulli(0.1).cdf(-0.5), 0.0);
  EXPECT_DOUBLE_EQ(ParametricDistribution::bernoulli(0.1).cdf(1.0), 1.0);
}

TEST(Distributions, InverseReferenceValues) {
  EXPECT_NEAR(ParametricDistribution::exponential(1.0).inverse_cdf(0.5), std::log(2.0),
              1e-12);
  EXPECT_NEAR(ParametricDistribution::normal(0, 1).inverse_cdf(0.5), 0.0, 1e-12);
  EXPECT_NEAR(ParametricDistribution::normal(0, 1).inverse_cdf(0.975), 1.959963984540054,
              1e-9);
  EXPECT_EQ(ParametricDistribution::bernoulli(0.1).inverse_cdf(0.95), 1.0);
  EXPECT_EQ(ParametricDistribution::bernoulli(0.1).inverse_cdf(0.9), 0.0);
  EXPECT_EQ(ParametricDistribution::bernoulli(0.1).inverse_cdf(0.5), 0.0);
}

TEST(Distributions, NormalMatchesErfc) {
  const auto n = ParametricDistribution::normal(1.5, 2.0);
  for (double x = -8; x <= 8; x += 0.37) {
    EXPECT_NEAR(n.cdf(x), oracle::normal_cdf((x - 1.5) / 2.0), 1e-14) << x;
  }
}

TEST(Distributions, BetaCdfMatchesQuadrature) {
  const auto b = ParametricDistribution::beta(2.0, 5.0);
  for (double x : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    const double ref = oracle::simpson(
        [](double t) { return 30.0 * t * std::pow(1.0 - t, 4); }, 0.0, x);
    EXPECT_NEAR(b.cdf(x), ref, 1e-10) << x;
  }
}

TEST(Distributions, DiscretePmfsMatchClosedForms) {
  const auto bin = ParametricDistribution::binomial(7, 0.3);
  double acc = 0.0;
  for (int k = 0; k <= 7; ++k) {
    const double ref = oracle::choose(7, k) * std::pow(0.3, k) * std::pow(0.7, 7 - k);
    acc += ref;
    EXPECT_NEAR(bin.pmf(k), ref, 1e-14);
    EXPECT_NEAR(bin.cdf(k), acc, 1e-13);
  }
  const auto poi = ParametricDistribution::poisson(2.5);
  double term = std::exp(-2.5);
  acc = 0.0;
  for (int k = 0; k < 20; ++k) {
    acc += term;
    EXPECT_NEAR(poi.pmf(k), term, 1e-14);
    EXPECT_NEAR(poi.cdf(k + 0.5), acc, 1e-13);
    term *= 2.5 / (k + 1);
  }
  // Failures before the first success: P(k) = p (1-p)^k from k = 0.
  const auto geo = ParametricDistribution::geometric(0.25);
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(geo.pmf(k), 0.25 * std::pow(0.75, k), 1e-15);
  }
  EXPECT_NEAR(geo.mean(), 3.0, 1e-12);
}

class RoundTrip : public ::testing::TestWithParam<ParametricDistribution> {};

TEST_P(RoundTrip, InverseThenCdfIsIdentity) {
  const auto& d = GetParam();
  double worst = 0.0;
  for (int k = 1; k <= 999; ++k) {
    const double u = k / 1000.0;
    worst = std::max(worst, std::abs(d.cdf(d.inverse_cdf(u)) - u));
  }
  EXPECT_LE(worst, 1e-9) << d.name();
}

INSTANTIATE_TEST_SUITE_P(Continuous, RoundTrip,
                         ::testing::Values(ParametricDistribution::uniform(-2, 3),
                                           ParametricDistribution::normal(0, 1),
                                           ParametricDistribution::exponential(0.5),
                                           ParametricDistribution::beta(2, 5),
                                           ParametricDistribution::beta(0.5, 0.5)));

TEST(Distributions, DiscreteInverseIsGeneralized) {
  for (const auto& d : {ParametricDistribution::binomial(5, 0.5),
                        ParametricDistribution::poisson(3.0),
                        ParametricDistribution::geometric(0.4)}) {
    for (int k = 1; k <= 999; ++k) {
      const double u = k / 1000.0;
      const double x = d.inverse_cdf(u);
      EXPECT_GE(d.cdf(x), u - 1e-12) << d.name();
      EXPECT_LT(d.cdf(x - 1.0), u) << d.name();
    }
  }
}

class SampleMoments : public ::testing::TestWithParam<ParametricDistribution> {};

TEST_P(SampleMoments, MeanWithinFourStandardErrors) {
  const auto& d = GetParam();
  RandomStream rng = RandomStream::derive(17, StreamDomain::kData, 0);
  const std::size_t n = 200000;
  const auto x = sample(d, rng, n);
  const double se = std::sqrt(d.variance() / n);
  EXPECT_NEAR(oracle::mean(x), d.mean(), 4.0 * se) << d.name();
  for (double v : x) ASSERT_TRUE(d.support().contains(v)) << d.name() << " " << v;
}

INSTANTIATE_TEST_SUITE_P(Families, SampleMoments,
                         ::testing::Values(ParametricDistribution::uniform(0, 1),
                                           ParametricDistribution::normal(2, 3),
                                           ParametricDistribution::exponential(2),
                                           ParametricDistribution::beta(2, 5),
                                           ParametricDistribution::bernoulli(0.3),
                                           ParametricDistribution::binomial(5, 0.5),
                                           ParametricDistribution::poisson(4),
                                           ParametricDistribution::geometric(0.2)));

TEST(Distributions, RejectsBadParameters) {
  EXPECT_THROW(ParametricDistribution::uniform(1, 1), std::invalid_argument);
  EXPECT_THROW(ParametricDistribution::normal(0, 0), std::invalid_argument);
  EXPECT_THROW(ParametricDistribution::bernoulli(1.5), std::invalid_argument);
  EXPECT_THROW(ParametricDistribution::binomial(-1, 0.5), std::invalid_argument);
  EXPECT_THROW(ParametricDistribution::poisson(0), std::invalid_argument);
  RandomStream rng(1);
  EXPECT_THROW(sample(ParametricDistribution::uniform(0, 1), rng, 0),
               std::invalid_argument);
}

TEST(RandomStream, DerivedStreamsAreReproducibleAndDistinct) {
  auto a = RandomStream::derive(5, StreamDomain::kRelease, 3, 0);
  auto b = RandomStream::derive(5, StreamDomain::kRelease, 3, 0);
  auto c = RandomStream::derive(5, StreamDomain::kHoldout, 3, 0);
  auto d = RandomStream::derive(5, StreamDomain::kRelease, 4, 0);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace dip
