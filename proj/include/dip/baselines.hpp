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

#ifndef DIP_BASELINES_HPP_
#define DIP_BASELINES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dip/noise.hpp"
#include "dip/random.hpp"

namespace dip {

/// Value range used to scale Laplace noise.
struct BoundsSpec {
  double lower = 0.0;
  double upper = 1.0;

  static BoundsSpec declared(double lower, double upper) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
      throw std::invalid_argument("bounds need finite lower < upper");
    }
    return {lower, upper};
  }

  /// [-max|z|, max|z|]
  static BoundsSpec symmetric(std::span<const double> values) {
    double top = 0.0;
    for (double v : values) top = std::max(top, std::abs(v));
    if (!(top > 0.0)) top = 1.0;
    return {-top, top};
  }

  /// [0, max z]
  static BoundsSpec nonnegative(std::span<const double> values) {
    double top = 0.0;
    for (double v : values) top = std::max(top, v);
    if (!(top > 0.0)) top = 1.0;
    return {0.0, top};
  }

  double width() const { return upper - lower; }
};

/// Laplace randomized mechanism: z + Laplace(0, (upper - lower) / epsilon).
/// With a non-empty grid, outputs are rounded to the nearest grid value.
template <class Streams>
std::vector<double> lrm_privatize(std::span<const double> values, double epsilon,
                                  const BoundsSpec& bounds, const Streams& streams,
                                  const std::vector<double>& grid = {},
                                  unsigned workers = 1) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
  const LaplaceScale scale(
      BoundsSpec::declared(bounds.lower, bounds.upper).width() / epsilon);
  std::vector<double> sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  std::vector<double> out(values.size());
  parallel_for(values.size(), workers, [&](std::size_t i) {
    auto draws = streams(i);
    double v = values[i] + draws.laplace(scale.b());
    if (!sorted_grid.empty()) {
      auto it = std::lower_bound(sorted_grid.begin(), sorted_grid.end(), v);
      if (it == sorted_grid.end()) {
        v = sorted_grid.back();
      } else if (it != sorted_grid.begin() && v - *(it - 1) <= *it - v) {
        v = *(it - 1);
      } else {
        v = *it;
      }
    }
    out[i] = v;
  });
  return out;
}

inline std::vector<double> lrm_privatize(std::span<const double> values,
                                         double epsilon, const BoundsSpec& bounds,
                                         std::uint64_t seed) {
  return lrm_privatize(values, epsilon, bounds, SeededStreams{seed});
}

/// Exponential-mechanism selection probabilities over `support`, with
/// quality q(v) = frequency of v in `sample` and sensitivity delta =
/// max |sample value| (1 if the sample is all zero).
struct ExmDistribution {
  std::vector<double> support;
  std::vector<double> probabilities;
  double sensitivity = 1.0;
};

inline ExmDistribution exm_probabilities(std::vector<double> support,
                                         std::span<const double> sample,
                                         double epsilon) {
  if (support.empty()) throw std::invalid_argument("exm: empty support");
  if (sample.empty()) throw std::invalid_argument("exm: empty sample");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  ExmDistribution d;
  d.sensitivity = 0.0;
  for (double v : sample) d.sensitivity = std::max(d.sensitivity, std::abs(v));
  if (!(d.sensitivity > 0.0)) d.sensitivity = 1.0;
  std::vector<double> counts(support.size(), 0.0);
  for (double v : sample) {
    const auto it = std::lower_bound(support.begin(), support.end(), v);
    if (it != support.end() && *it == v) counts[it - support.begin()] += 1.0;
  }
  const double n = static_cast<double>(sample.size());
  std::vector<double> exponent(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    exponent[k] = epsilon * (counts[k] / n) / (2.0 * d.sensitivity);
  }
  const double top = *std::max_element(exponent.begin(), exponent.end());
  double total = 0.0;
  d.probabilities.resize(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    d.probabilities[k] = std::exp(exponent[k] - top);
    total += d.probabilities[k];
  }
  for (double& p : d.probabilities) p /= total;
  d.support = std::move(support);
  return d;
}

/// Draws sample.size() values from the exponential mechanism.
template <class Streams>
std::vector<double> exm_sample_discrete(const std::vector<double>& support,
                                        std::span<const double> sample,
                                        double epsilon, const Streams& streams) {
  const ExmDistribution d = exm_probabilities(support, sample, epsilon);
  std::vector<double> cumulative(d.probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cumulative.size(); ++k) {
    acc += d.probabilities[k];
    cumulative[k] = acc;
  }
  cumulative.back() = 1.0;
  std::vector<double> out(sample.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto draws = streams(i);
    const double u = draws.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    out[i] = d.support[std::min<std::size_t>(it - cumulative.begin(),
                                             d.support.size() - 1)];
  }
  return out;
}

}  // namespace dip

#endif  // DIP_BASELINES_HPP_
