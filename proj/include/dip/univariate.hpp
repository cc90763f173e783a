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

#ifndef DIP_UNIVARIATE_HPP_
#define DIP_UNIVARIATE_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/continualize.hpp"
#include "dip/distributions.hpp"
#include "dip/error.hpp"
#include "dip/noise.hpp"
#include "dip/random.hpp"

namespace dip {

/// Declared kind of a data column.
struct ColumnKind {
  enum class Type { kContinuous, kDiscrete, kCategorical, kMixed };

  Type type = Type::kContinuous;
  /// Discrete: support points; empty means "distinct hold-out values".
  std::vector<double> support;
  /// Categorical: level labels; the first is the base level.
  std::vector<std::string> levels;
  /// Mixed: jump locations.
  std::vector<double> jumps;

  static ColumnKind continuous() { return {}; }
  static ColumnKind discrete(std::vector<double> support = {}) {
    ColumnKind k;
    k.type = Type::kDiscrete;
    k.support = std::move(support);
    return k;
  }
  static ColumnKind categorical(std::vector<std::string> levels) {
    ColumnKind k;
    k.type = Type::kCategorical;
    k.levels = std::move(levels);
    return k;
  }
  static ColumnKind mixed(std::vector<double> jumps) {
    ColumnKind k;
    k.type = Type::kMixed;
    k.jumps = std::move(jumps);
    return k;
  }

  bool operator==(const ColumnKind&) const = default;
};

/// What the privatizer needs from a (possibly continualized) distribution.
template <class T>
concept PrivatizationTarget = requires(const T& t, double x) {
  { t.continualize(x, x) } -> std::convertible_to<double>;
  { t.evaluate(x) } -> std::convertible_to<double>;
  { t.inverse(x) } -> std::convertible_to<double>;
  { t.ceiling(x) } -> std::convertible_to<double>;
};

namespace detail {

inline double clamp_open_unit(double u) {
  return std::clamp(u, std::numeric_limits<double>::min(), 1.0 - 0x1.0p-53);
}

}  // namespace detail

/// F known and continuous: evaluate = F, inverse = F^{-1}, L = identity.
class KnownContinuousTarget {
 public:
  explicit KnownContinuousTarget(const ParametricDistribution& dist) : dist_(dist) {
    if (dist_.is_discrete()) {
      throw std::invalid_argument("KnownContinuousTarget: discrete family");
    }
  }
  double continualize(double z, double) const {
    if (!dist_.support().contains(z)) {
      throw DataError("value " + std::to_string(z) + " outside the support of " +
                      dist_.name());
    }
    return z;
  }
  double evaluate(double v) const { return dist_.cdf(v); }
  double inverse(double u) const {
    return dist_.inverse_cdf(detail::clamp_open_unit(u));
  }
  double ceiling(double v) const { return v; }

 private:
  const ParametricDistribution& dist_;
};

/// F known and discrete on an integer lattice: F_V spreads the mass of k
/// uniformly over (k - 1, k]; L is the integer ceiling clamped to the support.
class KnownDiscreteTarget {
 public:
  explicit KnownDiscreteTarget(const ParametricDistribution& dist)
      : dist_(dist), support_(dist.support()) {
    if (!dist_.is_discrete()) {
      throw std::invalid_argument("KnownDiscreteTarget: continuous family");
    }
  }
  double continualize(double z, double u) const {
    if (!support_.contains(z)) {
      throw DataError("value " + std::to_string(z) + " outside the support of " +
                      dist_.name());
    }
    return z - u;
  }
  double evaluate(double v) const {
    if (v <= support_.lo - 1.0) return 0.0;
    if (v > support_.hi) return 1.0;
    const double k = std::ceil(v);
    const double upper = dist_.cdf(k);
    if (v == k) return upper;
    const double lower = dist_.cdf(k - 1.0);
    return lower + (upper - lower) * (v - (k - 1.0));
  }
  double inverse(double u) const {
    u = detail::clamp_open_unit(u);
    const double k = dist_.inverse_cdf(u);
    const double lower = dist_.cdf(k - 1.0);
    const double upper = dist_.cdf(k);
    const double x = (k - 1.0) + (u - lower) / (upper - lower);
    return std::clamp(x, std::nextafter(k - 1.0, k), k);
  }
  double ceiling(double v) const {
    return std::clamp(std::ceil(v), support_.lo, support_.hi);
  }

 private:
  const ParametricDistribution& dist_;
  Support support_;
};

/// Continualized mixed distribution as a target (L = L0).
static_assert(PrivatizationTarget<ContinualizedMixedCdf>);
static_assert(PrivatizationTarget<ContinualizedCdf>);
static_assert(PrivatizationTarget<KnownContinuousTarget>);
static_assert(PrivatizationTarget<KnownDiscreteTarget>);

/// One DIP release of a single value: continualize, push through the target
/// CDF, add Laplace noise, map back with G, the inverse CDF and the ceiling.
template <PrivatizationTarget T, DrawSource D>
double privatize_value(const T& target, double z, LaplaceScale scale, D& draws) {
  const double v = target.continualize(z, draws.uniform());
  const double w = target.evaluate(v) + draws.laplace(scale.b());
  return target.ceiling(target.inverse(convolved_cdf(w, scale)));
}

/// A privatizer bound to one target and one budget. Immutable; shareable.
template <PrivatizationTarget T>
class UnivariatePrivatizer {
 public:
  UnivariatePrivatizer(T target, LaplaceScale scale)
      : target_(std::move(target)), scale_(scale) {}

  const T& target() const { return target_; }
  LaplaceScale scale() const { return scale_; }

  template <DrawSource D>
  double operator()(double z, D& draws) const {
    return privatize_value(target_, z, scale_, draws);
  }

  /// Privatizes every value with the stream streams(i) for record i.
  template <class Streams>
  std::vector<double> privatize_all(std::span<const double> values,
                                    const Streams& streams,
                                    unsigned workers = 1) const {
    std::vector<double> out(values.size());
    parallel_for(values.size(), workers, [&](std::size_t i) {
      auto draws = streams(i);
      out[i] = (*this)(values[i], draws);
    });
    return out;
  }

 private:
  T target_;
  LaplaceScale scale_;
};

/// DIP with a known distribution: continuous families directly, discrete
/// families after continualization with the generalized ceiling.
template <class Streams>
std::vector<double> privatize_known(std::span<const double> values,
                                    const ParametricDistribution& dist,
                                    double epsilon, const Streams& streams,
                                    unsigned workers = 1) {
  const LaplaceScale scale = LaplaceScale::for_epsilon(epsilon);
  if (dist.is_discrete()) {
    return UnivariatePrivatizer(KnownDiscreteTarget(dist), scale)
        .privatize_all(values, streams, workers);
  }
  return UnivariatePrivatizer(KnownContinuousTarget(dist), scale)
      .privatize_all(values, streams, workers);
}

inline std::vector<double> privatize_known(std::span<const double> values,
                                           const ParametricDistribution& dist,
                                           double epsilon, std::uint64_t seed,
                                           unsigned workers = 1) {
  return privatize_known(values, dist, epsilon, SeededStreams{seed}, workers);
}

/// DIP with a known mixed distribution (L = L0).
template <class Streams>
std::vector<double> privatize_known(std::span<const double> values,
                                    const MixedDistribution& dist, double epsilon,
                                    const Streams& streams, unsigned workers = 1) {
  return UnivariatePrivatizer(continualize_mixed(dist),
                              LaplaceScale::for_epsilon(epsilon))
      .privatize_all(values, streams, workers);
}

/// Ceiling map for a column kind. Discrete columns without a declared
/// support use the distinct values of `reference`.
inline CeilingMap ceiling_for_kind(const ColumnKind& kind,
                                   const std::vector<double>& reference) {
  switch (kind.type) {
    case ColumnKind::Type::kContinuous:
      return IdentityCeiling{};
    case ColumnKind::Type::kDiscrete: {
      std::vector<double> support = kind.support;
      if (support.empty()) {
        support = reference;
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
      }
      return GeneralizedCeiling(std::move(support));
    }
    case ColumnKind::Type::kMixed:
      return MixedCeiling(kind.jumps);
    case ColumnKind::Type::kCategorical:
      break;
  }
  throw std::invalid_argument(
      "categorical columns must be expanded into indicator coordinates");
}

/// Continualizes the hold-out with streams(j) and builds C-hat from it.
/// Discrete hold-out values must lie in the declared support.
template <class Streams>
ContinualizedCdf build_empirical_cdf(std::span<const double> holdout,
                                     const ColumnKind& kind,
                                     const Streams& holdout_streams) {
  if (holdout.size() < 2) {
    throw std::invalid_argument("hold-out sample needs at least two values");
  }
  std::vector<double> raw(holdout.begin(), holdout.end());
  CeilingMap ceiling = ceiling_for_kind(kind, raw);
  std::vector<double> continualized(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    auto draws = holdout_streams(j);
    const double u = draws.uniform();
    continualized[j] = std::visit(
        [&](const auto& m) { return m.continualize(raw[j], u); }, ceiling);
  }
  return continualized_edf(continualized, std::move(ceiling));
}

/// DIP with C-hat estimated from a hold-out sample that is never released.
template <class Streams, class HoldoutStreams>
std::vector<double> privatize_empirical(std::span<const double> values,
                                        std::span<const double> holdout,
                                        double epsilon, const ColumnKind& kind,
                                        const Streams& streams,
                                        const HoldoutStreams& holdout_streams,
                                        unsigned workers = 1) {
  const LaplaceScale scale = LaplaceScale::for_epsilon(epsilon);
  if (holdout.empty()) throw std::invalid_argument("empty hold-out sample");
  return UnivariatePrivatizer(build_empirical_cdf(holdout, kind, holdout_streams),
                              scale)
      .privatize_all(values, streams, workers);
}

inline std::vector<double> privatize_empirical(std::span<const double> values,
                                               std::span<const double> holdout,
                                               double epsilon,
                                               const ColumnKind& kind,
                                               std::uint64_t seed,
                                               unsigned workers = 1) {
  return privatize_empirical(values, holdout, epsilon, kind,
                             SeededStreams{seed, StreamDomain::kRelease, 0},
                             SeededStreams{seed, StreamDomain::kHoldout, 0},
                             workers);
}

}  // namespace dip

#endif  // DIP_UNIVARIATE_HPP_
