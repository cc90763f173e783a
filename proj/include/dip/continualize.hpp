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

#ifndef DIP_CONTINUALIZE_HPP_
#define DIP_CONTINUALIZE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dip/distributions.hpp"
#include "dip/error.hpp"
#include "dip/random.hpp"

namespace dip {

/// Support points a_1 < ... < a_s with their probability masses. The anchor
/// a_0 = a_1 - 1 closes the first continualization interval.
struct JumpSpec {
  std::vector<double> points;
  std::vector<double> masses;

  double anchor() const { return points.front() - 1.0; }
  double total_mass() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
  }

  void validate() const {
    if (points.empty() || points.size() != masses.size()) {
      throw std::invalid_argument("JumpSpec: need one mass per point");
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (!std::isfinite(points[k])) {
        throw std::invalid_argument("JumpSpec: points must be finite");
      }
      if (k > 0 && !(points[k] > points[k - 1])) {
        throw std::invalid_argument("JumpSpec: points must be strictly increasing");
      }
      if (!(masses[k] > 0.0) || masses[k] > 1.0) {
        throw std::invalid_argument("JumpSpec: masses must lie in (0, 1]");
      }
    }
    if (total_mass() > 1.0 + 1e-12) {
      throw std::invalid_argument("JumpSpec: masses sum to more than one");
    }
  }
};

/// Jump table of a finite-support parametric distribution.
inline JumpSpec jump_spec(const ParametricDistribution& dist) {
  const Support s = dist.support();
  if (!dist.is_discrete() || !std::isfinite(s.hi)) {
    throw std::invalid_argument("jump_spec: need a finite-support discrete family");
  }
  JumpSpec spec;
  for (double x = s.lo; x <= s.hi; x += 1.0) {
    const double mass = dist.pmf(x);
    if (mass > 0) {
      spec.points.push_back(x);
      spec.masses.push_back(mass);
    }
  }
  return spec;
}

/// L for continuous columns.
struct IdentityCeiling {
  double continualize(double z, double) const { return z; }
  double operator()(double v) const { return v; }
};

/// inf{a_k : a_k >= v} over a finite increasing support, and the matching
/// continualization z -> z - U with U uniform on [0, a_k - a_{k-1}).
class GeneralizedCeiling {
 public:
  explicit GeneralizedCeiling(std::vector<double> support)
      : support_(std::move(support)) {
    if (support_.empty()) {
      throw std::invalid_argument("GeneralizedCeiling: empty support");
    }
    for (std::size_t k = 0; k < support_.size(); ++k) {
      if (!std::isfinite(support_[k]) ||
          (k > 0 && !(support_[k] > support_[k - 1]))) {
        throw std::invalid_argument(
            "GeneralizedCeiling: support must be finite and strictly increasing");
      }
    }
  }

  const std::vector<double>& support() const { return support_; }

  double operator()(double v) const {
    if (v > support_.back()) {
      throw std::invalid_argument("generalized_ceiling: value above the support");
    }
    return *std::lower_bound(support_.begin(), support_.end(), v);
  }

  bool contains(double z) const {
    return std::binary_search(support_.begin(), support_.end(), z);
  }

  /// Width a_k - a_{k-1} of the interval owned by support point index k.
  double gap(std::size_t k) const {
    return k == 0 ? 1.0 : support_[k] - support_[k - 1];
  }

  /// V = z - u * (a_k - a_{k-1}) for z = a_k and u in [0, 1).
  double continualize(double z, double u) const {
    const auto it = std::lower_bound(support_.begin(), support_.end(), z);
    if (it == support_.end() || *it != z) {
      throw DataError("continualize: value " + std::to_string(z) +
                      " is not a support point");
    }
    return z - u * gap(static_cast<std::size_t>(it - support_.begin()));
  }

  /// Maps an arbitrary value onto the support first (ceiling, clamped at the
  /// top), then continualizes it.
  double continualize_snapped(double z, double u) const {
    return continualize(z > support_.back() ? support_.back() : (*this)(z), u);
  }

 private:
  std::vector<double> support_;
};

/// L0 for mixed variables with finitely many jumps. Jump a_k (k counted from
/// the first non-negative jump) owns the unit interval [a_k + k - 1, a_k + k];
/// continuous values in (a_k, a_{k+1}) are shifted by k.
class MixedCeiling {
 public:
  explicit MixedCeiling(std::vector<double> jumps) : jumps_(std::move(jumps)) {
    if (jumps_.empty()) {
      throw std::invalid_argument("MixedCeiling: need at least one jump");
    }
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
      if (!std::isfinite(jumps_[j]) ||
          (j > 0 && !(jumps_[j] > jumps_[j - 1]))) {
        throw std::invalid_argument(
            "MixedCeiling: jumps must be finite and strictly increasing");
      }
    }
    first_nonnegative_ = static_cast<long>(
        std::lower_bound(jumps_.begin(), jumps_.end(), 0.0) - jumps_.begin());
  }

  const std::vector<double>& jumps() const { return jumps_; }

  /// Shift index k of jump j.
  double shift_of_jump(std::size_t j) const {
    return static_cast<double>(static_cast<long>(j) - first_nonnegative_);
  }

  /// Right end a_k + k of the interval owned by jump j.
  double jump_top(std::size_t j) const { return jumps_[j] + shift_of_jump(j); }

  bool is_jump(double z) const {
    return std::binary_search(jumps_.begin(), jumps_.end(), z);
  }

  /// Shift applied to a non-jump value z.
  double shift_of_value(double z) const {
    const long below = static_cast<long>(
        std::lower_bound(jumps_.begin(), jumps_.end(), z) - jumps_.begin());
    return static_cast<double>(below - first_nonnegative_ - 1);
  }

  double continualize(double z, double u) const {
    const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), z);
    if (it != jumps_.end() && *it == z) {
      return z + shift_of_jump(static_cast<std::size_t>(it - jumps_.begin())) - u;
    }
    return z + shift_of_value(z);
  }

  double operator()(double v) const {
    // First jump whose interval top is >= v.
    std::size_t lo = 0;
    std::size_t hi = jumps_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (jump_top(mid) >= v) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo < jumps_.size()) {
      if (v >= jump_top(lo) - 1.0) return jumps_[lo];
      return v - (shift_of_jump(lo) - 1.0);
    }
    return v - shift_of_jump(jumps_.size() - 1);
  }

 private:
  std::vector<double> jumps_;
  long first_nonnegative_ = 0;
};

using CeilingMap = std::variant<IdentityCeiling, GeneralizedCeiling, MixedCeiling>;

inline double apply_ceiling(const CeilingMap& map, double v) {
  return std::visit([v](const auto& m) { return m(v); }, map);
}

inline double generalized_ceiling(double v, const std::vector<double>& support) {
  return GeneralizedCeiling(support)(v);
}

/// Piecewise-linear, strictly increasing CDF through (knots, values) with
/// values running from 0 at knots[0] to 1 at knots.back(), together with
/// the ceiling map that undoes continualization.
class ContinualizedCdf {
 public:
  ContinualizedCdf(std::vector<double> knots, std::vector<double> values,
                   CeilingMap ceiling = IdentityCeiling{})
      : knots_(std::move(knots)),
        values_(std::move(values)),
        ceiling_(std::move(ceiling)) {
    if (knots_.size() < 2 || knots_.size() != values_.size()) {
      throw std::invalid_argument("ContinualizedCdf: need >= 2 matching knots");
    }
    if (values_.front() != 0.0 || values_.back() != 1.0) {
      throw std::invalid_argument("ContinualizedCdf: values must run from 0 to 1");
    }
    for (std::size_t k = 1; k < knots_.size(); ++k) {
      if (!(knots_[k] > knots_[k - 1]) || !(values_[k] > values_[k - 1])) {
        throw std::invalid_argument("ContinualizedCdf: must be strictly increasing");
      }
    }
    delta_ = 1e-12 * (knots_.back() - knots_.front());
  }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  const CeilingMap& ceiling_map() const { return ceiling_; }
  double lower() const { return knots_.front(); }
  double upper() const { return knots_.back(); }

  /// 0 at or below the first knot, 1 above the last.
  double evaluate(double x) const {
    if (x <= knots_.front()) return 0.0;
    if (x > knots_.back()) return 1.0;
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    if (*it == x) return values_[k];
    const double t = (x - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
    return values_[k - 1] + t * (values_[k] - values_[k - 1]);
  }

  /// Inverse on (0, 1); u <= 0 maps just inside the first interval and
  /// u >= 1 to the last knot.
  double inverse(double u) const {
    if (!(u > 0.0)) return knots_.front() + delta_;
    if (u >= 1.0) return knots_.back();
    const auto it = std::lower_bound(values_.begin(), values_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - values_.begin());
    if (*it == u) return knots_[k];
    const double t = (u - values_[k - 1]) / (values_[k] - values_[k - 1]);
    const double x = knots_[k - 1] + t * (knots_[k] - knots_[k - 1]);
    return std::max(x, knots_[k - 1] + delta_);
  }

  double continualize(double z, double u) const {
    return std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, GeneralizedCeiling>) {
            return m.continualize_snapped(z, u);
          } else {
            return m.continualize(z, u);
          }
        },
        ceiling_);
  }

  double ceiling(double v) const { return apply_ceiling(ceiling_, v); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  CeilingMap ceiling_;
  double delta_ = 0.0;
};

/// F_V of a discrete distribution: mass P_k spread uniformly over
/// (a_{k-1}, a_k].
inline ContinualizedCdf continualize_discrete(const JumpSpec& spec) {
  spec.validate();
  if (std::abs(spec.total_mass() - 1.0) > 1e-12) {
    throw std::invalid_argument("continualize_discrete: masses must sum to one");
  }
  std::vector<double> knots{spec.anchor()};
  std::vector<double> values{0.0};
  double acc = 0.0;
  for (std::size_t k = 0; k < spec.points.size(); ++k) {
    acc += spec.masses[k];
    knots.push_back(spec.points[k]);
    values.push_back(k + 1 == spec.points.size() ? 1.0 : acc);
  }
  return ContinualizedCdf(std::move(knots), std::move(values),
                          GeneralizedCeiling(spec.points));
}

/// V = z - U with U uniform on [0, a_k - a_{k-1}).
template <DrawSource D>
double continualize_value(double z, const JumpSpec& spec, D& draws) {
  const GeneralizedCeiling ceiling(spec.points);
  if (!ceiling.contains(z)) {
    throw DataError("continualize_value: value not in the support");
  }
  return ceiling.continualize(z, draws.uniform());
}

/// A finite mixture of point masses and continuous parametric components.
struct MixedDistribution {
  struct Component {
    double weight;
    ParametricDistribution dist;
  };
  JumpSpec jumps;
  std::vector<Component> continuous;

  void validate() const {
    jumps.validate();
    double total = jumps.total_mass();
    for (const auto& c : continuous) {
      if (c.dist.is_discrete()) {
        throw std::invalid_argument("MixedDistribution: continuous part is discrete");
      }
      if (!(c.weight > 0)) {
        throw std::invalid_argument("MixedDistribution: weights must be positive");
      }
      total += c.weight;
    }
    if (continuous.empty() || std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "MixedDistribution: need continuous mass and a total mass of one");
    }
  }

  /// F(x), right-continuous.
  double cdf(double x) const {
    double f = 0.0;
    for (const auto& c : continuous) f += c.weight * c.dist.cdf(x);
    for (std::size_t k = 0; k < jumps.points.size() && jumps.points[k] <= x; ++k) {
      f += jumps.masses[k];
    }
    return std::min(f, 1.0);
  }

  bool in_support(double x) const {
    if (std::binary_search(jumps.points.begin(), jumps.points.end(), x)) {
      return true;
    }
    for (const auto& c : continuous) {
      if (c.dist.support().contains(x)) return true;
    }
    return false;
  }
};

/// Continualized CDF of a mixed distribution with the L0 ceiling.
class ContinualizedMixedCdf {
 public:
  explicit ContinualizedMixedCdf(MixedDistribution dist)
      : dist_(std::move(dist)), ceiling_(dist_.jumps.points) {
    dist_.validate();
  }

  const MixedCeiling& ceiling_map() const { return ceiling_; }
  const MixedDistribution& distribution() const { return dist_; }

  double evaluate(double v) const {
    const auto& pts = dist_.jumps.points;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double top = ceiling_.jump_top(j);
      if (v <= top && v >= top - 1.0) {
        const double before = dist_.cdf(pts[j]) - dist_.jumps.masses[j];
        return std::clamp(before + dist_.jumps.masses[j] * (v - (top - 1.0)), 0.0, 1.0);
      }
    }
    return dist_.cdf(ceiling_(v));
  }

  /// Generalized inverse inf{v : F_V(v) >= u} by bracketed bisection.
  double inverse(double u) const {
    u = std::clamp(u, std::numeric_limits<double>::min(), 1.0 - 0x1.0p-53);
    double lo = -1.0;
    double hi = 1.0;
    while (evaluate(lo) >= u && lo > -1e300) lo *= 2.0;
    while (evaluate(hi) < u && hi < 1e300) hi *= 2.0;
    const double width = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    return detail::bisect([this](double v) { return evaluate(v); }, u, lo, hi,
                          width);
  }

  double continualize(double z, double u) const {
    if (!dist_.in_support(z)) {
      throw DataError("continualize: value outside the mixed support");
    }
    return ceiling_.continualize(z, u);
  }

  double ceiling(double v) const { return ceiling_(v); }

 private:
  MixedDistribution dist_;
  MixedCeiling ceiling_;
};

inline ContinualizedMixedCdf continualize_mixed(const MixedDistribution& dist) {
  return ContinualizedMixedCdf(dist);
}

/// Sorts values and separates ties so the order statistics are strictly
/// increasing: a value not above its predecessor is moved to the
/// predecessor plus 1e-9 times the value range. Returns the sorted values
/// and, for each sorted position, the index of the originating input.
inline std::pair<std::vector<double>, std::vector<std::size_t>>
strict_order_statistics(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> sorted(values.size());
  for (std::size_t j = 0; j < order.size(); ++j) sorted[j] = values[order[j]];
  if (sorted.empty()) return {sorted, order};
  double range = sorted.back() - sorted.front();
  if (!(range > 0)) range = 1.0;
  const double step = 1e-9 * range;
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (!(sorted[j] > sorted[j - 1])) sorted[j] = sorted[j - 1] + step;
  }
  return {sorted, order};
}

/// Piecewise-linear continualized edf through the hold-out order statistics
/// d_1 < ... < d_m with anchor d_0 = d_1 - 1 and value k/m at d_k.
inline ContinualizedCdf continualized_edf(const std::vector<double>& holdout,
                                          CeilingMap ceiling = IdentityCeiling{}) {
  const std::size_t m = holdout.size();
  if (m < 2) throw std::invalid_argument("continualized_edf: need m >= 2");
  for (double v : holdout) {
    if (!std::isfinite(v)) throw DataError("continualized_edf: non-finite value");
  }
  auto [sorted, order] = strict_order_statistics(holdout);
  std::vector<double> knots;
  std::vector<double> values;
  knots.reserve(m + 1);
  values.reserve(m + 1);
  knots.push_back(sorted.front() - 1.0);
  values.push_back(0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    knots.push_back(sorted[k - 1]);
    values.push_back(k == m ? 1.0 : static_cast<double>(k) / static_cast<double>(m));
  }
  return ContinualizedCdf(std::move(knots), std::move(values), std::move(ceiling));
}

}  // namespace dip

#endif  // DIP_CONTINUALIZE_HPP_
