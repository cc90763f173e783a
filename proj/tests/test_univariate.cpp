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


#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "dip/univariate.hpp"
#include "oracles.hpp"

namespace dip {
namespace {

std::vector<double> draw(const ParametricDistribution& d, std::size_t n, std::uint64_t seed) {
  RandomStream rng = RandomStream::derive(seed, StreamDomain::kData, 0);
  return sample(d, rng, n);
}

TEST(PrivatizeValue, ZeroNoiseKeepsTheMedian) {
  const auto exp1 = ParametricDistribution::exponential(1.0);
  const auto normal = ParametricDistribution::normal(0, 1);
  FixedDraws zero{0.5, 0.0};
  for (double eps : {0.5, 1.0, 4.0}) {
    const auto b = LaplaceScale::for_epsilon(eps);
    EXPECT_NEAR(privatize_value(KnownContinuousTarget(exp1), std::log(2.0), b, zero),
                std::log(2.0), 1e-12);
    EXPECT_NEAR(privatize_value(KnownContinuousTarget(normal), 0.0, b, zero), 0.0, 1e-12);
  }
}

TEST(PrivatizeValue, ZeroNoiseMatchesReferencePipeline) {
  const auto exp1 = ParametricDistribution::exponential(1.0);
  const KnownContinuousTarget target(exp1);
  const double b = 1.0 / 2.0;
  FixedDraws zero{0.5, 0.0};
  for (double z : {0.05, 0.3, 1.0, 2.5}) {
    const double u = oracle::uniform_plus_laplace_cdf(1.0 - std::exp(-z), b);
    EXPECT_NEAR(privatize_value(target, z, LaplaceScale(b), zero), -std::log1p(-u), 1e-8);
  }
}

TEST(PrivatizeValue, SaturatedNoiseHitsTheSupportEnds) {
  const auto bin = ParametricDistribution::binomial(5, 0.5);
  const KnownDiscreteTarget target(bin);
  FixedDraws up{0.5, 50.0};
  FixedDraws down{0.5, -50.0};
  EXPECT_EQ(privatize_value(target, 2.0, LaplaceScale(1.0), up), 5.0);
  EXPECT_EQ(privatize_value(target, 2.0, LaplaceScale(1.0), down), 0.0);
}

TEST(PrivatizeValue, RejectsValuesOutsideTheSupport) {
  const auto exp1 = ParametricDistribution::exponential(1.0);
  const auto bern = ParametricDistribution::bernoulli(0.3);
  FixedDraws zero;
  EXPECT_THROW(privatize_value(KnownContinuousTarget(exp1), -1.0, LaplaceScale(1), zero),
               DataError);
  EXPECT_THROW(privatize_value(KnownDiscreteTarget(bern), 2.0, LaplaceScale(1), zero),
               DataError);
}

TEST(PrivatizeKnown, BernoulliMeanIsPreserved) {
  const auto bern = ParametricDistribution::bernoulli(0.3);
  const std::size_t n = 200000;
  const auto z = draw(bern, n, 1);
  const auto out = privatize_known(z, bern, 1.0, std::uint64_t{7});
  for (double v : out) ASSERT_TRUE(v == 0.0 || v == 1.0);
  EXPECT_NEAR(oracle::mean(out), 0.3, 4.0 * std::sqrt(0.21 / n));
  // The release is not the identity.
  std::size_t changed = 0;
  for (std::size_t i = 0; i < n; ++i) changed += out[i] != z[i];
  EXPECT_GT(changed, n / 10);
}

TEST(PrivatizeKnown, ContinuousLawIsPreserved) {
  for (const auto& d : {ParametricDistribution::normal(1, 2),
                        ParametricDistribution::beta(2, 5),
                        ParametricDistribution::exponential(3)}) {
    const std::size_t n = 50000;
    const auto out = privatize_known(draw(d, n, 2), d, 0.5, std::uint64_t{8});
    EXPECT_LE(oracle::ks_one_sample(out, [&](double x) { return d.cdf(x); }),
              1.95 / std::sqrt(static_cast<double>(n)))
        << d.name();
  }
}

TEST(PrivatizeKnown, InfiniteDiscreteSupport) {
  const auto poi = ParametricDistribution::poisson(3.0);
  const std::size_t n = 100000;
  const auto out = privatize_known(draw(poi, n, 3), poi, 2.0, std::uint64_t{9});
  for (double v : out) ASSERT_TRUE(v >= 0 && v == std::floor(v));
  EXPECT_NEAR(oracle::mean(out), 3.0, 4.0 * std::sqrt(3.0 / n));
}

TEST(PrivatizeKnown, MixedPointMassIsPreserved) {
  MixedDistribution mix;
  mix.jumps = JumpSpec{{0.0}, {0.3}};
  mix.continuous.push_back({0.7, ParametricDistribution::normal(0, 1)});
  RandomStream rng(5);
  const std::size_t n = 50000;
  std::vector<double> z(n);
  for (auto& v : z) v = rng.uniform() < 0.3 ? 0.0 : rng.normal();
  const auto out = privatize_known(z, mix, 1.0, SeededStreams{4});
  double zeros = 0.0;
  for (double v : out) zeros += v == 0.0;
  EXPECT_NEAR(zeros / n, 0.3, 4.0 * std::sqrt(0.21 / n));
  std::vector<double> nonzero;
  for (double v : out) {
    if (v != 0.0) nonzero.push_back(v);
  }
  const auto normal = ParametricDistribution::normal(0, 1);
  EXPECT_LE(oracle::ks_one_sample(nonzero, [&](double x) { return normal.cdf(x); }),
            1.95 / std::sqrt(static_cast<double>(nonzero.size())));
}

TEST(PrivatizeKnown, WorkerCountDoesNotChangeOutput) {
  const auto d = ParametricDistribution::binomial(5, 0.5);
  const auto z = draw(d, 5000, 4);
  EXPECT_EQ(privatize_known(z, d, 1.0, SeededStreams{3}, 1),
            privatize_known(z, d, 1.0, SeededStreams{3}, 4));
  EXPECT_NE(privatize_known(z, d, 1.0, std::uint64_t{3}),
            privatize_known(z, d, 1.0, std::uint64_t{4}));
}

TEST(PrivatizeEmpirical, DiscreteOutputsStayOnTheHoldoutSupport) {
  const auto d = ParametricDistribution::poisson(4.0);
  const auto holdout = draw(d, 300, 5);
  const auto values = draw(d, 3000, 6);
  const std::set<double> support(holdout.begin(), holdout.end());
  std::vector<double> inside;
  for (double v : values) {
    if (v <= *support.rbegin()) inside.push_back(v);
  }
  const auto out = privatize_empirical(inside, holdout, 1.0, ColumnKind::discrete(), 11);
  for (double v : out) ASSERT_TRUE(support.count(v)) << v;
}

TEST(PrivatizeEmpirical, ContinuousOutputsStayInsideTheKnots) {
  const auto d = ParametricDistribution::normal(0, 1);
  const auto holdout = draw(d, 250, 7);
  const auto out = privatize_empirical(draw(d, 2000, 8), holdout, 0.5,
                                       ColumnKind::continuous(), 12);
  const auto [lo, hi] = std::minmax_element(holdout.begin(), holdout.end());
  for (double v : out) {
    ASSERT_GT(v, *lo - 1.0);
    ASSERT_LE(v, *hi);
  }
  EXPECT_LE(oracle::ks_two_sample(out, holdout), 0.12);
}

TEST(PrivatizeEmpirical, Validation) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(privatize_empirical(two, one, 1.0, ColumnKind::continuous(), 1),
               std::invalid_argument);
  EXPECT_THROW(privatize_empirical(two, two, 0.0, ColumnKind::continuous(), 1),
               std::invalid_argument);
  const std::vector<double> off{0.5, 1.0};
  EXPECT_THROW(privatize_empirical(two, off, 1.0, ColumnKind::discrete({0.0, 1.0}), 1),
               DataError);
}

}  // namespace
}  // namespace dip
