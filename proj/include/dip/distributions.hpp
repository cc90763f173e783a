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

#ifndef DIP_DISTRIBUTIONS_HPP_
#define DIP_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "dip/random.hpp"

namespace dip {

enum class Family {
  kUniform,
  kNormal,
  kExponential,
  kBeta,
  kBernoulli,
  kBinomial,
  kPoisson,
  kGeometric,
};

enum class DistributionKind { kContinuous, kDiscrete };

/// Interval [lo, hi] for continuous families; the integer lattice
/// {lo, lo + 1, ..., hi} for discrete ones. Bounds may be infinite.
struct Support {
  bool lattice = false;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const {
    if (std::isnan(x) || x < lo || x > hi) return false;
    return !lattice || x == std::floor(x);
  }
};

namespace detail {

/// Smallest x in [lo, hi] (to `width`) with f(x) >= target, f non-decreasing.
template <class F>
double bisect(F&& f, double target, double lo, double hi, double width) {
  for (int i = 0; i < 400 && hi - lo > width; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace detail

/// A known distribution F with its inverse. Immutable after construction;
/// safe to share between threads.
class ParametricDistribution {
 public:
  static ParametricDistribution uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("uniform: require finite a < b");
    }
    return ParametricDistribution(Family::kUniform, a, b);
  }
  static ParametricDistribution normal(double mean, double sd) {
    if (!(sd > 0) || !std::isfinite(mean) || !std::isfinite(sd)) {
      throw std::invalid_argument("normal: require finite mean and sd > 0");
    }
    return ParametricDistribution(Family::kNormal, mean, sd);
  }
  static ParametricDistribution exponential(double rate) {
    if (!(rate > 0) || !std::isfinite(rate)) {
      throw std::invalid_argument("exponential: require rate > 0");
    }
    return ParametricDistribution(Family::kExponential, rate, 0);
  }
  static ParametricDistribution beta(double alpha, double beta) {
    if (!(alpha > 0) || !(beta > 0)) {
      throw std::invalid_argument("beta: require alpha, beta > 0");
    }
    return ParametricDistribution(Family::kBeta, alpha, beta);
  }
  static ParametricDistribution bernoulli(double p) {
    if (!(p > 0 && p < 1)) {
      throw std::invalid_argument("bernoulli: require 0 < p < 1");
    }
    return ParametricDistribution(Family::kBernoulli, p, 0);
  }
  static ParametricDistribution binomial(int n, double p) {
    if (n < 1 || !(p > 0 && p < 1)) {
      throw std::invalid_argument("binomial: require n >= 1, 0 < p < 1");
    }
    return ParametricDistribution(Family::kBinomial, n, p);
  }
  static ParametricDistribution poisson(double rate) {
    if (!(rate > 0) || !(rate < 1e5)) {
      throw std::invalid_argument("poisson: require 0 < rate < 1e5");
    }
    return ParametricDistribution(Family::kPoisson, rate, 0);
  }
  /// Number of failures before the first success: support {0, 1, 2, ...}.
  static ParametricDistribution geometric(double p) {
    if (!(p > 0 && p < 1)) {
      throw std::invalid_argument("geometric: require 0 < p < 1");
    }
    return ParametricDistribution(Family::kGeometric, p, 0);
  }

  Family family() const { return family_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  DistributionKind kind() const {
    switch (family_) {
      case Family::kUniform:
      case Family::kNormal:
      case Family::kExponential:
      case Family::kBeta:
        return DistributionKind::kContinuous;
      default:
        return DistributionKind::kDiscrete;
    }
  }
  bool is_discrete() const { return kind() == DistributionKind::kDiscrete; }

  Support support() const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    switch (family_) {
      case Family::kUniform:
        return {false, p1_, p2_};
      case Family::kNormal:
        return {false, -kInf, kInf};
      case Family::kExponential:
        return {false, 0.0, kInf};
      case Family::kBeta:
        return {false, 0.0, 1.0};
      case Family::kBernoulli:
        return {true, 0.0, 1.0};
      case Family::kBinomial:
        return {true, 0.0, p1_};
      case Family::kPoisson:
      case Family::kGeometric:
        return {true, 0.0, kInf};
    }
    return {};
  }

  double cdf(double x) const {
    if (std::isnan(x)) throw std::invalid_argument("cdf: x is NaN");
    switch (family_) {
      case Family::kUniform:
        if (x <= p1_) return 0.0;
        if (x >= p2_) return 1.0;
        return (x - p1_) / (p2_ - p1_);
      case Family::kNormal:
        return 0.5 * std::erfc(-(x - p1_) / (p2_ * M_SQRT2));
      case Family::kExponential:
        return x <= 0 ? 0.0 : -std::expm1(-p1_ * x);
      case Family::kBeta:
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return boost::math::ibeta(p1_, p2_, x);
      case Family::kBernoulli:
        if (x < 0) return 0.0;
        return x < 1 ? 1.0 - p1_ : 1.0;
      case Family::kBinomial:
      case Family::kPoisson:
        return table_cdf(x);
      case Family::kGeometric:
        if (x < 0) return 0.0;
        if (std::isinf(x)) return 1.0;
        return -std::expm1((std::floor(x) + 1.0) * std::log1p(-p1_));
    }
    return 0.0;
  }

  /// Probability mass at x (zero for continuous families).
  double pmf(double x) const {
    if (!is_discrete() || !support().contains(x)) return 0.0;
    return cdf(x) - cdf(x - 1.0);
  }

  /// Continuous families: the exact inverse. Discrete families: the
  /// generalized inverse inf{x : F(x) >= u}.
  double inverse_cdf(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
      throw std::invalid_argument("inverse_cdf: u must lie in (0, 1)");
    }
    switch (family_) {
      case Family::kUniform:
        return p1_ + u * (p2_ - p1_);
      case Family::kNormal:
        return p1_ - p2_ * M_SQRT2 * boost::math::erfc_inv(2.0 * u);
      case Family::kExponential:
        return -std::log1p(-u) / p1_;
      case Family::kBeta:
        return boost::math::ibeta_inv(p1_, p2_, u);
      case Family::kBernoulli:
        return u <= 1.0 - p1_ ? 0.0 : 1.0;
      case Family::kBinomial:
      case Family::kPoisson: {
        const auto it = std::lower_bound(cumulative_.begin(),
                                         cumulative_.end(), u);
        return static_cast<double>(it - cumulative_.begin());
      }
      case Family::kGeometric: {
        double k = std::max(
            0.0, std::ceil(std::log1p(-u) / std::log1p(-p1_)) - 1.0);
        while (k > 0 && cdf(k - 1.0) >= u) k -= 1.0;
        while (cdf(k) < u) k += 1.0;
        return k;
      }
    }
    return 0.0;
  }

  /// Log density of a continuous family at x (-inf off the support).
  double log_pdf(double x) const {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    switch (family_) {
      case Family::kUniform:
        return (x < p1_ || x > p2_) ? kNegInf : -std::log(p2_ - p1_);
      case Family::kNormal: {
        const double z = (x - p1_) / p2_;
        return -0.5 * z * z - std::log(p2_) - 0.5 * std::log(2.0 * M_PI);
      }
      case Family::kExponential:
        return x < 0 ? kNegInf : std::log(p1_) - p1_ * x;
      case Family::kBeta:
        if (x <= 0 || x >= 1) return kNegInf;
        return (p1_ - 1) * std::log(x) + (p2_ - 1) * std::log1p(-x) -
               log_beta_;
      default:
        throw std::invalid_argument("log_pdf: discrete family");
    }
  }

  double mean() const {
    switch (family_) {
      case Family::kUniform:
        return 0.5 * (p1_ + p2_);
      case Family::kNormal:
        return p1_;
      case Family::kExponential:
        return 1.0 / p1_;
      case Family::kBeta:
        return p1_ / (p1_ + p2_);
      case Family::kBernoulli:
        return p1_;
      case Family::kBinomial:
        return p1_ * p2_;
      case Family::kPoisson:
        return p1_;
      case Family::kGeometric:
        return (1.0 - p1_) / p1_;
    }
    return 0.0;
  }

  double variance() const {
    switch (family_) {
      case Family::kUniform:
        return (p2_ - p1_) * (p2_ - p1_) / 12.0;
      case Family::kNormal:
        return p2_ * p2_;
      case Family::kExponential:
        return 1.0 / (p1_ * p1_);
      case Family::kBeta: {
        const double s = p1_ + p2_;
        return p1_ * p2_ / (s * s * (s + 1.0));
      }
      case Family::kBernoulli:
        return p1_ * (1.0 - p1_);
      case Family::kBinomial:
        return p1_ * p2_ * (1.0 - p2_);
      case Family::kPoisson:
        return p1_;
      case Family::kGeometric:
        return (1.0 - p1_) / (p1_ * p1_);
    }
    return 0.0;
  }

  double sample_one(RandomStream& rng) const {
    if (family_ == Family::kNormal) return p1_ + p2_ * rng.normal();
    return inverse_cdf(rng.uniform_open());
  }

  std::string name() const {
    const auto fmt = [](double v) {
      std::string s = std::to_string(v);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    switch (family_) {
      case Family::kUniform:
        return "Uniform(" + fmt(p1_) + "," + fmt(p2_) + ")";
      case Family::kNormal:
        return "Normal(" + fmt(p1_) + "," + fmt(p2_) + ")";
      case Family::kExponential:
        return "Exp(" + fmt(p1_) + ")";
      case Family::kBeta:
        return "Beta(" + fmt(p1_) + "," + fmt(p2_) + ")";
      case Family::kBernoulli:
        return "Bernoulli(" + fmt(p1_) + ")";
      case Family::kBinomial:
        return "Binomial(" + fmt(p1_) + "," + fmt(p2_) + ")";
      case Family::kPoisson:
        return "Poisson(" + fmt(p1_) + ")";
      case Family::kGeometric:
        return "Geometric(" + fmt(p1_) + ")";
    }
    return "?";
  }

 private:
  ParametricDistribution(Family family, double p1, double p2)
      : family_(family), p1_(p1), p2_(p2) {
    if (family_ == Family::kBeta) {
      log_beta_ = std::lgamma(p1_) + std::lgamma(p2_) - std::lgamma(p1_ + p2_);
    } else if (family_ == Family::kBinomial) {
      build_binomial_table();
    } else if (family_ == Family::kPoisson) {
      build_poisson_table();
    }
  }

  void build_binomial_table() {
    const boost::math::binomial_distribution<double> d(p1_, p2_);
    for (int k = 0; k <= static_cast<int>(p1_); ++k) {
      cumulative_.push_back(boost::math::cdf(d, k));
    }
    cumulative_.back() = 1.0;
  }

  void build_poisson_table() {
    const boost::math::poisson_distribution<double> d(p1_);
    const int k_max = static_cast<int>(p1_ + 40.0 * std::sqrt(p1_) + 60.0);
    for (int k = 0; k <= k_max; ++k) {
      cumulative_.push_back(boost::math::cdf(d, k));
      if (k > p1_ && boost::math::cdf(boost::math::complement(d, k)) < 1e-17) break;
    }
    cumulative_.back() = 1.0;
  }

  double table_cdf(double x) const {
    if (x < 0) return 0.0;
    const double k = std::floor(x);
    if (k >= static_cast<double>(cumulative_.size() - 1)) return 1.0;
    return cumulative_[static_cast<std::size_t>(k)];
  }

  Family family_;
  double p1_;
  double p2_;
  double log_beta_ = 0.0;
  std::vector<double> cumulative_;
};

inline double cdf(const ParametricDistribution& dist, double x) {
  return dist.cdf(x);
}

inline double inverse_cdf(const ParametricDistribution& dist, double u) {
  return dist.inverse_cdf(u);
}

/// n i.i.d. draws; deterministic given the stream state.
inline std::vector<double> sample(const ParametricDistribution& dist,
                                  RandomStream& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = dist.sample_one(rng);
  return out;
}

}  // namespace dip

#endif  // DIP_DISTRIBUTIONS_HPP_
