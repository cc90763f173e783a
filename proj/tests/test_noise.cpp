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

#include "dip/noise.hpp"
#include "oracles.hpp"

namespace dip {
namespace {

TEST(ConvolvedCdf, ReferenceValuesAtUnitScale) {
  const LaplaceScale b(1.0);
  EXPECT_NEAR(convolved_cdf(0.5, b), 0.5, 1e-15);
  EXPECT_NEAR(convolved_cdf(0.0, b), 0.31606028, 1e-8);
  EXPECT_NEAR(convolved_cdf(1.0, b), 0.68393972, 1e-8);
}

TEST(ConvolvedCdf, MatchesQuadrature) {
  for (double b : {0.05, 0.25, 1.0, 3.0, 20.0}) {
    for (double x = -3.0; x <= 4.0; x += 0.173) {
      EXPECT_NEAR(convolved_cdf(x, LaplaceScale(b)),
                  oracle::uniform_plus_laplace_cdf(x, b), 1e-9)
          << "b=" << b << " x=" << x;
    }
  }
}

TEST(ConvolvedCdf, ContinuousSymmetricAndIncreasing) {
  for (double b : {0.01, 0.5, 2.0, 100.0}) {
    const LaplaceScale s(b);
    for (double edge : {0.0, 1.0}) {
      EXPECT_NEAR(convolved_cdf(edge - 1e-12, s), convolved_cdf(edge + 1e-12, s), 1e-10);
    }
    double prev = 0.0;
    for (double x = -5.0; x <= 6.0; x += 0.01) {
      const double g = convolved_cdf(x, s);
      EXPECT_NEAR(g + convolved_cdf(1.0 - x, s), 1.0, 1e-14) << b << " " << x;
      EXPECT_GE(g, prev);
      prev = g;
    }
  }
}

TEST(ConvolvedCdf, ExtremeScales) {
  // Tiny noise: G approaches the Uniform(0, 1) CDF.
  EXPECT_NEAR(convolved_cdf(0.3, LaplaceScale(1e-9)), 0.3, 1e-12);
  EXPECT_NEAR(convolved_cdf(-0.1, LaplaceScale(1e-9)), 0.0, 1e-12);
  // Huge noise: G approaches the Laplace CDF shifted by 1/2.
  const LaplaceScale big(1e6);
  EXPECT_NEAR(convolved_cdf(7.0, big), laplace_cdf(6.5, big), 1e-12);
}

TEST(LaplaceScale, Validation) {
  EXPECT_THROW(LaplaceScale(0.0), std::invalid_argument);
  EXPECT_THROW(LaplaceScale(-1.0), std::invalid_argument);
  EXPECT_THROW(LaplaceScale::for_epsilon(0.0), std::invalid_argument);
  EXPECT_THROW(LaplaceScale::for_epsilon(INFINITY), std::invalid_argument);
  EXPECT_DOUBLE_EQ(LaplaceScale::for_epsilon(4.0).b(), 0.25);
}

TEST(LaplaceSampling, MomentsAndKs) {
  RandomStream rng = RandomStream::derive(99, StreamDomain::kAudit, 0);
  const double b = 2.0;
  const std::size_t n = 1000000;
  std::vector<double> x(n);
  for (auto& v : x) v = rng.laplace(b);
  const double se = std::sqrt(2.0 * b * b / n);
  EXPECT_NEAR(oracle::mean(x), 0.0, 4.0 * se);
  std::size_t below = 0;
  for (double v : x) below += v < 0;
  EXPECT_NEAR(static_cast<double>(below) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
  EXPECT_LE(oracle::ks_one_sample(x, [&](double t) { return oracle::laplace_cdf(t, b); }),
            0.002);
}

TEST(LaplaceCdf, DensityIntegratesToCdf) {
  const LaplaceScale s(0.7);
  for (double x : {-2.0, -0.3, 0.0, 0.4, 3.0}) {
    const auto f = [&](double t) { return std::exp(laplace_log_density(t, s)); };
    const double ref = x <= 0 ? oracle::simpson(f, -40.0, x, 20000)
                              : oracle::simpson(f, -40.0, 0.0, 20000) +
                                    oracle::simpson(f, 0.0, x, 20000);
    EXPECT_NEAR(laplace_cdf(x, s), ref, 1e-9);
  }
}

}  // namespace
}  // namespace dip
