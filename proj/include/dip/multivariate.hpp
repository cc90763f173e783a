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

#ifndef DIP_MULTIVARIATE_HPP_
#define DIP_MULTIVARIATE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "dip/continualize.hpp"
#include "dip/error.hpp"
#include "dip/noise.hpp"
#include "dip/random.hpp"
#include "dip/rank_tree.hpp"
#include "dip/table.hpp"
#include "dip/univariate.hpp"

namespace dip {

/// Sequential composition: each of the p coordinates gets epsilon / p and
/// Laplace noise of scale p / epsilon.
class BudgetPlan {
 public:
  BudgetPlan(double epsilon, std::size_t coordinates)
      : epsilon_(epsilon), coordinates_(coordinates) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("epsilon must be positive and finite");
    }
    if (coordinates == 0) throw std::invalid_argument("need >= 1 coordinate");
  }

  double total() const { return epsilon_; }
  std::size_t coordinates() const { return coordinates_; }
  double per_coordinate() const {
    return epsilon_ / static_cast<double>(coordinates_);
  }
  LaplaceScale scale() const {
    return LaplaceScale(static_cast<double>(coordinates_) / epsilon_);
  }

 private:
  double epsilon_;
  std::size_t coordinates_;
};

/// One privatized coordinate: a plain column, or the indicator of one
/// non-base level of a categorical column.
struct Coordinate {
  std::size_t column = 0;
  std::size_t level = 0;  // categorical only; indicator of levels[level]
  bool indicator = false;
  CeilingMap ceiling = IdentityCeiling{};
  bool strict_support = false;  // declared discrete support: reject others

  double raw_value(const DataTable& t, std::size_t row) const {
    const double v = t.column(column).values[row];
    if (!indicator) return v;
    return v == static_cast<double>(level) ? 1.0 : 0.0;
  }
};

/// Expands columns (in `order`) into coordinates. Discrete columns without
/// declared support take the distinct hold-out values as support.
inline std::vector<Coordinate> expand_coordinates(const DataTable& holdout,
                                                  const std::vector<std::size_t>& order) {
  std::vector<Coordinate> coords;
  for (std::size_t c : order) {
    const Column& col = holdout.column(c);
    switch (col.kind.type) {
      case ColumnKind::Type::kCategorical:
        for (std::size_t lvl = 1; lvl < col.kind.levels.size(); ++lvl) {
          Coordinate k;
          k.column = c;
          k.level = lvl;
          k.indicator = true;
          k.ceiling = GeneralizedCeiling({0.0, 1.0});
          coords.push_back(std::move(k));
        }
        break;
      default: {
        Coordinate k;
        k.column = c;
        try {
          k.ceiling = ceiling_for_kind(col.kind, col.values);
        } catch (const std::invalid_argument& e) {
          throw DataError("column '" + col.name + "': " + e.what());
        }
        k.strict_support = col.kind.type == ColumnKind::Type::kDiscrete &&
                           !col.kind.support.empty();
        coords.push_back(std::move(k));
        break;
      }
    }
  }
  return coords;
}

/// Segment (lower, upper] carrying the conditional mass of one hold-out
/// record in one coordinate.
struct CubeSegment {
  std::size_t record = 0;
  std::size_t rank = 0;  // j, with upper = d_j
  double lower = 0.0;
  double upper = 0.0;
};

/// Order statistics of the continualized hold-out, linked back to records.
/// Immutable after construction.
class HoldoutIndex {
 public:
  /// `continualized` is row-major m x p.
  HoldoutIndex(std::vector<double> continualized, std::size_t coordinates,
               std::vector<CeilingMap> ceilings)
      : p_(coordinates) {
    if (p_ == 0 || continualized.size() % p_ != 0) {
      throw std::invalid_argument("HoldoutIndex: bad shape");
    }
    m_ = continualized.size() / p_;
    if (m_ < 2) throw std::invalid_argument("HoldoutIndex: need m >= 2");
    if (ceilings.size() != p_) {
      throw std::invalid_argument("HoldoutIndex: one ceiling per coordinate");
    }
    sorted_.resize(p_);
    fences_.resize(p_);
    record_at_rank_.resize(p_);
    rank_of_.assign(m_ * p_, 0);
    delta_.resize(p_);
    marginals_.reserve(p_);
    std::vector<double> column(m_);
    for (std::size_t l = 0; l < p_; ++l) {
      for (std::size_t q = 0; q < m_; ++q) column[q] = continualized[q * p_ + l];
      auto [sorted, order] = strict_order_statistics(column);
      sorted_[l] = std::move(sorted);
      for (std::size_t j = kFenceStride - 1; j < m_; j += kFenceStride) {
        fences_[l].push_back(sorted_[l][j]);
      }
      record_at_rank_[l] = std::move(order);
      for (std::size_t j = 0; j < m_; ++j) {
        rank_of_[record_at_rank_[l][j] * p_ + l] = static_cast<std::int32_t>(j + 1);
      }
      delta_[l] = 1e-12 * (sorted_[l].back() - anchor(l));
      marginals_.push_back(continualized_edf(column, ceilings[l]));
    }
    trees_.resize(p_);
    for (std::size_t len = 2; len + 1 <= p_; ++len) {
      std::vector<std::int32_t> coords(m_ * len);
      for (std::size_t q = 0; q < m_; ++q) {
        for (std::size_t t = 0; t < len; ++t) coords[q * len + t] = rank_of_[q * p_ + t];
      }
      trees_[len] = detail::RankTree(std::move(coords), len);
    }
  }

  std::size_t holdout_size() const { return m_; }
  std::size_t coordinates() const { return p_; }

  /// d_{jl} for j = 1..m.
  double order_statistic(std::size_t l, std::size_t j) const {
    return j == 0 ? anchor(l) : sorted_[l][j - 1];
  }
  double anchor(std::size_t l) const { return sorted_[l].front() - 1.0; }

  /// Rank j of record q in coordinate l (1-based).
  std::size_t rank_of(std::size_t q, std::size_t l) const {
    return static_cast<std::size_t>(rank_of_[q * p_ + l]);
  }

  /// Marginal C-hat of coordinate l.
  const ContinualizedCdf& marginal(std::size_t l) const { return marginals_[l]; }

  /// j such that x lies in (d_{j-1}, d_j]; 0 below d_0, m + 1 above d_m.
  std::size_t cell_of(std::size_t l, double x) const {
    const auto& s = sorted_[l];
    if (x <= anchor(l)) return 0;
    // The fences narrow the search to one block of the sorted column.
    const auto& f = fences_[l];
    const std::size_t block =
        static_cast<std::size_t>(std::lower_bound(f.begin(), f.end(), x) - f.begin());
    const auto lo = s.begin() + static_cast<std::ptrdiff_t>(block * kFenceStride);
    const auto hi = s.begin() + static_cast<std::ptrdiff_t>(
                                    std::min(m_, (block + 1) * kFenceStride));
    return static_cast<std::size_t>(std::lower_bound(lo, hi, x) - s.begin()) + 1;
  }

  CubeSegment segment(std::size_t q, std::size_t l) const {
    const std::size_t j = rank_of(q, l);
    return {q, j, order_statistic(l, j - 1), order_statistic(l, j)};
  }

  /// The unique hold-out record whose bottom-left cube contains the prefix
  /// (coordinates 0 .. prefix.size()-1), and its segment in coordinate
  /// prefix.size(); nullopt when no cube contains the prefix.
  std::optional<CubeSegment> conditional_edf(std::span<const double> prefix) const {
    return conditional_from_cells(cells_of(prefix));
  }

  /// As conditional_edf, with the prefix given by its cells (cell_of).
  std::optional<CubeSegment> conditional_from_cells(std::span<const std::size_t> cells) const {
    const std::size_t l = check_prefix(cells.size());
    const std::size_t j1 = cells[0];
    if (j1 == 0 || j1 > m_) return std::nullopt;
    const std::size_t q = record_at_rank_[0][j1 - 1];
    for (std::size_t t = 1; t < l; ++t) {
      if (cells[t] != rank_of(q, t)) return std::nullopt;
    }
    return segment(q, l);
  }

  /// Record whose cube is nearest to the prefix in per-coordinate rank
  /// space (L-infinity), ties to the lowest record.
  std::size_t nearest_cube(std::span<const double> prefix) const {
    return nearest_from_cells(cells_of(prefix));
  }

  std::size_t nearest_from_cells(std::span<const std::size_t> cells) const {
    const std::size_t l = check_prefix(cells.size());
    const auto clamped = [&](std::size_t t) {
      return static_cast<std::int32_t>(std::clamp<std::size_t>(cells[t], 1, m_));
    };
    if (l == 1) return record_at_rank_[0][static_cast<std::size_t>(clamped(0)) - 1];
    std::array<std::int32_t, 16> small;
    std::vector<std::int32_t> large;
    std::span<std::int32_t> query;
    if (l <= small.size()) {
      query = std::span<std::int32_t>(small.data(), l);
    } else {
      large.resize(l);
      query = large;
    }
    for (std::size_t t = 0; t < l; ++t) query[t] = clamped(t);
    return trees_[l].nearest(query).id;
  }

  std::vector<std::size_t> cells_of(std::span<const double> prefix) const {
    std::vector<std::size_t> cells(prefix.size());
    for (std::size_t t = 0; t < prefix.size(); ++t) cells[t] = cell_of(t, prefix[t]);
    return cells;
  }

  /// Conditional CDF of coordinate l on a segment.
  static double segment_cdf(const CubeSegment& s, double v) {
    if (v <= s.lower) return 0.0;
    if (v > s.upper) return 1.0;
    return (v - s.lower) / (s.upper - s.lower);
  }

  /// Inverse on a segment; u <= 0 maps just inside the segment.
  double segment_inverse(const CubeSegment& s, std::size_t l, double u) const {
    if (!(u > 0.0)) return s.lower + delta_[l];
    if (u >= 1.0) return s.upper;
    return std::max(s.lower + u * (s.upper - s.lower), s.lower + delta_[l]);
  }

  /// Joint C-hat of the first two coordinates: each record's 1/m mass is
  /// spread uniformly over its bottom-left cell.
  double joint_cdf_2d(double x1, double x2) const {
    if (p_ < 2) throw std::invalid_argument("joint_cdf_2d: need p >= 2");
    const auto fraction = [](const CubeSegment& s, double x) {
      return std::clamp((x - s.lower) / (s.upper - s.lower), 0.0, 1.0);
    };
    double total = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      total += fraction(segment(q, 0), x1) * fraction(segment(q, 1), x2);
    }
    return total / static_cast<double>(m_);
  }

 private:
  std::size_t check_prefix(std::size_t l) const {
    if (l == 0 || l >= p_) {
      throw std::invalid_argument("conditional lookup: prefix length must be in [1, p)");
    }
    return l;
  }

  static constexpr std::size_t kFenceStride = 64;

  std::size_t m_ = 0;
  std::size_t p_ = 0;
  std::vector<std::vector<double>> sorted_;
  std::vector<std::vector<double>> fences_;  // every kFenceStride-th order statistic
  std::vector<std::vector<std::size_t>> record_at_rank_;
  std::vector<std::int32_t> rank_of_;
  std::vector<double> delta_;
  std::vector<ContinualizedCdf> marginals_;
  std::vector<detail::RankTree> trees_;  // indexed by prefix length
};

struct RecordResult {
  std::vector<double> values;  // after ceilings
  std::size_t forward_fallbacks = 0;
  std::size_t inverse_fallbacks = 0;
};

/// Chain-rule privatization of one continualized record. The forward CDF of
/// coordinate l conditions on the raw prefix; the inverse conditions on the
/// already-privatized prefix. Prefixes that fall in no cube are snapped to
/// the nearest one. Ceilings are applied after all coordinates are done.
/// Draw order: Laplace e_1, ..., e_p.
template <DrawSource D>
RecordResult privatize_continualized_record(std::span<const double> v,
                                            const HoldoutIndex& index,
                                            const BudgetPlan& plan,
                                            const std::vector<CeilingMap>& ceilings,
                                            D& draws) {
  const std::size_t p = index.coordinates();
  if (v.size() != p || plan.coordinates() != p || ceilings.size() != p) {
    throw std::invalid_argument("privatize_record: coordinate count mismatch");
  }
  const LaplaceScale scale = plan.scale();
  RecordResult result;
  std::vector<double> released(p);

  const ContinualizedCdf& first = index.marginal(0);
  {
    const double w = first.evaluate(v[0]) + draws.laplace(scale.b());
    released[0] = first.inverse(convolved_cdf(w, scale));
  }
  if (p > 1) {
    const std::vector<std::size_t> raw_cells = index.cells_of(v.subspan(0, p - 1));
    std::vector<std::size_t> private_cells(p - 1);
    for (std::size_t l = 1; l < p; ++l) {
      private_cells[l - 1] = index.cell_of(l - 1, released[l - 1]);
      const std::span<const std::size_t> raw_prefix(raw_cells.data(), l);
      auto forward = index.conditional_from_cells(raw_prefix);
      if (!forward) {
        ++result.forward_fallbacks;
        forward = index.segment(index.nearest_from_cells(raw_prefix), l);
      }
      const std::span<const std::size_t> private_prefix(private_cells.data(), l);
      auto backward = index.conditional_from_cells(private_prefix);
      if (!backward) {
        ++result.inverse_fallbacks;
        backward = index.segment(index.nearest_from_cells(private_prefix), l);
      }
      const double w =
          HoldoutIndex::segment_cdf(*forward, v[l]) + draws.laplace(scale.b());
      released[l] = index.segment_inverse(*backward, l, convolved_cdf(w, scale));
    }
  }
  result.values.resize(p);
  for (std::size_t l = 0; l < p; ++l) {
    result.values[l] = apply_ceiling(ceilings[l], released[l]);
  }
  return result;
}

/// Continualizes a raw record (one uniform per coordinate, in order) and
/// privatizes it.
template <DrawSource D>
RecordResult privatize_record(std::span<const double> record, const HoldoutIndex& index,
                              const BudgetPlan& plan,
                              const std::vector<CeilingMap>& ceilings, D& draws) {
  if (record.size() != ceilings.size()) {
    throw std::invalid_argument("privatize_record: record has wrong length");
  }
  std::vector<double> v(record.size());
  for (std::size_t l = 0; l < record.size(); ++l) {
    const double u = draws.uniform();
    v[l] = std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, GeneralizedCeiling>) {
            return m.continualize_snapped(record[l], u);
          } else {
            return m.continualize(record[l], u);
          }
        },
        ceilings[l]);
  }
  return privatize_continualized_record(std::span<const double>(v), index, plan,
                                        ceilings, draws);
}

struct ReleaseConfig {
  double epsilon = 1.0;
  double holdout_ratio = 0.25;
  /// Column privatization order (indices into the table); empty = schema order.
  std::vector<std::size_t> order;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// What a release records about itself. Hold-out rows are never listed,
/// only counted.
struct RunMetadata {
  double epsilon = 0.0;
  std::size_t coordinates = 0;
  double epsilon_per_coordinate = 0.0;
  double laplace_scale = 0.0;
  std::size_t released_rows = 0;
  std::size_t holdout_rows = 0;
  double holdout_ratio = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> order;
  std::size_t forward_fallbacks = 0;
  std::size_t inverse_fallbacks = 0;
  std::size_t laplace_draws = 0;
};

struct Release {
  DataTable table;
  RunMetadata metadata;
};

namespace detail {

inline std::vector<std::size_t> resolve_order(const DataTable& table,
                                              const std::vector<std::size_t>& order) {
  std::vector<std::size_t> resolved = order;
  if (resolved.empty()) {
    resolved.resize(table.cols());
    std::iota(resolved.begin(), resolved.end(), std::size_t{0});
  }
  std::vector<std::size_t> check = resolved;
  std::sort(check.begin(), check.end());
  for (std::size_t c = 0; c < check.size(); ++c) {
    if (check.size() != table.cols() || check[c] != c) {
      throw std::invalid_argument("column order must be a permutation of the columns");
    }
  }
  return resolved;
}

}  // namespace detail

/// Privatizes `to_privatize` against a separate hold-out (or public) sample
/// with the same schema.
inline Release privatize_with_holdout(const DataTable& to_privatize,
                                      const DataTable& holdout,
                                      const ReleaseConfig& config) {
  if (to_privatize.cols() != holdout.cols()) {
    throw DataError("hold-out and release tables have different columns");
  }
  for (std::size_t c = 0; c < holdout.cols(); ++c) {
    if (holdout.column(c).name != to_privatize.column(c).name ||
        !(holdout.column(c).kind == to_privatize.column(c).kind)) {
      throw DataError("column '" + holdout.column(c).name +
                      "' differs between hold-out and release tables");
    }
  }
  const auto order = detail::resolve_order(holdout, config.order);
  const std::vector<Coordinate> coords = expand_coordinates(holdout, order);
  const std::size_t p = coords.size();
  const std::size_t m = holdout.rows();
  const std::size_t n = to_privatize.rows();
  const BudgetPlan plan(config.epsilon, p);

  std::vector<CeilingMap> ceilings;
  ceilings.reserve(p);
  for (const auto& k : coords) ceilings.push_back(k.ceiling);

  for (const auto& k : coords) {
    if (!k.strict_support) continue;
    const auto& ceiling = std::get<GeneralizedCeiling>(k.ceiling);
    for (const DataTable* t : {&holdout, &to_privatize}) {
      for (double x : t->column(k.column).values) {
        if (!ceiling.contains(x)) {
          throw DataError("column '" + t->column(k.column).name + "': value " +
                          std::to_string(x) + " is outside the declared support");
        }
      }
    }
  }

  std::vector<double> continualized(m * p);
  for (std::size_t q = 0; q < m; ++q) {
    RandomStream draws = RandomStream::derive(config.seed, StreamDomain::kHoldout, q, 0);
    for (std::size_t l = 0; l < p; ++l) {
      const double z = coords[l].raw_value(holdout, q);
      const double u = draws.uniform();
      try {
        continualized[q * p + l] = std::visit(
            [&](const auto& c) { return c.continualize(z, u); }, coords[l].ceiling);
      } catch (const std::exception& e) {
        throw DataError("column '" + holdout.column(coords[l].column).name +
                        "': " + e.what());
      }
    }
  }
  const HoldoutIndex index(std::move(continualized), p, ceilings);

  std::vector<std::vector<double>> out(p, std::vector<double>(n));
  std::vector<std::size_t> forward(n, 0);
  std::vector<std::size_t> inverse(n, 0);
  // Records are visited in order of their first coordinate so that
  // consecutive lookups touch nearby parts of the index. Each record keeps
  // its own stream and output slot, so the result does not depend on it.
  std::vector<std::size_t> visit(n);
  std::iota(visit.begin(), visit.end(), std::size_t{0});
  std::sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) {
    const double va = coords[0].raw_value(to_privatize, a);
    const double vb = coords[0].raw_value(to_privatize, b);
    return va != vb ? va < vb : a < b;
  });
  parallel_for(n, config.workers, [&](std::size_t k) {
    const std::size_t i = visit[k];
    std::vector<double> record(p);
    for (std::size_t l = 0; l < p; ++l) record[l] = coords[l].raw_value(to_privatize, i);
    RandomStream draws = RandomStream::derive(config.seed, StreamDomain::kRelease, i, 0);
    RecordResult r = privatize_record(std::span<const double>(record), index, plan,
                                      ceilings, draws);
    for (std::size_t l = 0; l < p; ++l) out[l][i] = r.values[l];
    forward[i] = r.forward_fallbacks;
    inverse[i] = r.inverse_fallbacks;
  });

  // Reassemble columns in schema order; categorical indicators fold back to
  // the first level whose indicator is set, else the base level.
  std::vector<Column> columns;
  columns.reserve(to_privatize.cols());
  for (std::size_t c = 0; c < to_privatize.cols(); ++c) {
    const Column& src = to_privatize.column(c);
    Column col{src.name, src.kind, std::vector<double>(n, 0.0)};
    if (src.kind.type == ColumnKind::Type::kCategorical) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < p; ++l) {
          if (coords[l].column == c && out[l][i] == 1.0) {
            col.values[i] = static_cast<double>(coords[l].level);
            break;
          }
        }
      }
    } else {
      for (std::size_t l = 0; l < p; ++l) {
        if (coords[l].column == c) col.values = out[l];
      }
    }
    columns.push_back(std::move(col));
  }

  Release release{DataTable(std::move(columns)), {}};
  RunMetadata& meta = release.metadata;
  meta.epsilon = config.epsilon;
  meta.coordinates = p;
  meta.epsilon_per_coordinate = plan.per_coordinate();
  meta.laplace_scale = plan.scale().b();
  meta.released_rows = n;
  meta.holdout_rows = m;
  meta.holdout_ratio = config.holdout_ratio;
  meta.seed = config.seed;
  for (std::size_t c : order) meta.order.push_back(holdout.column(c).name);
  for (std::size_t i = 0; i < n; ++i) {
    meta.forward_fallbacks += forward[i];
    meta.inverse_fallbacks += inverse[i];
  }
  meta.laplace_draws = n * p;
  return release;
}

/// Full pipeline: split, continualize, privatize coordinate by coordinate
/// with epsilon / p each, apply ceilings.
inline Release privatize_table(const DataTable& table, const ReleaseConfig& config) {
  SamplePartition part = split_sample(table, config.holdout_ratio, config.seed);
  return privatize_with_holdout(part.to_privatize, part.holdout, config);
}

}  // namespace dip

#endif  // DIP_MULTIVARIATE_HPP_
