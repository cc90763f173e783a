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

#ifndef DIP_NOISE_HPP_
#define DIP_NOISE_HPP_

#include <cmath>
#include <stdexcept>

#include "dip/random.hpp"

namespace dip {

/// Scale b of a centered Laplace distribution.
class LaplaceScale {
 public:
  explicit LaplaceScale(double b) : b_(b) {
    if (!(b > 0) || !std::isfinite(b)) {
      throw std::invalid_argument("LaplaceScale: b must be positive and finite");
    }
  }

  /// b = 1 / epsilon for a single coordinate.
  static LaplaceScale for_epsilon(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("epsilon must be positive and finite");
    }
    return LaplaceScale(1.0 / epsilon);
  }

  double b() const { return b_; }

 private:
  double b_;
};

template <DrawSource D>
double sample_laplace(D& draws, LaplaceScale scale) {
  return draws.laplace(scale.b());
}

inline double laplace_cdf(double x, LaplaceScale scale) {
  const double b = scale.b();
  return x < 0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

inline double laplace_log_density(double x, LaplaceScale scale) {
  return -std::abs(x) / scale.b() - std::log(2.0 * scale.b());
}

/// CDF of U + e with U ~ Uniform(0, 1) and e ~ Laplace(0, b).
///
/// The factor (1 - e^{-1/b}) is formed with expm1 so that neither b -> 0
/// nor b -> infinity loses precision, and the middle branch's difference
/// of exponentials is factored for the same reason.
inline double convolved_cdf(double x, LaplaceScale scale) {
  const double b = scale.b();
  const double half_b = 0.5 * b;
  const double one_minus_decay = -std::expm1(-1.0 / b);
  if (x < 0.0) {
    return half_b * std::exp(x / b) * one_minus_decay;
  }
  if (x <= 1.0) {
    // e^{-x/b} - e^{(x-1)/b} = -e^{-x/b} * expm1((2x - 1) / b)
    return x - half_b * std::exp(-x / b) * std::expm1((2.0 * x - 1.0) / b);
  }
  return 1.0 - half_b * std::exp(-(x - 1.0) / b) * one_minus_decay;
}

inline double convolved_cdf_G(double x, LaplaceScale scale) {
  return convolved_cdf(x, scale);
}

}  // namespace dip

#endif  // DIP_NOISE_HPP_
