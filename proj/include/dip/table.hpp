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

#ifndef DIP_TABLE_HPP_
#define DIP_TABLE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dip/error.hpp"
#include "dip/random.hpp"
#include "dip/univariate.hpp"

namespace dip {

/// A named column. Categorical columns hold level indices into kind.levels.
struct Column {
  std::string name;
  ColumnKind kind;
  std::vector<double> values;
};

/// Column-ordered records.
class DataTable {
 public:
  DataTable() = default;
  explicit DataTable(std::vector<Column> columns) : columns_(std::move(columns)) {
    validate();
  }

  std::size_t rows() const {
    return columns_.empty() ? 0 : columns_.front().values.size();
  }
  std::size_t cols() const { return columns_.size(); }

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t c) const { return columns_.at(c); }
  Column& column(std::size_t c) { return columns_.at(c); }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (columns_[c].name == name) return c;
    }
    throw std::invalid_argument("no column named '" + name + "'");
  }

  void add_column(Column column) {
    columns_.push_back(std::move(column));
    validate();
  }

  /// Sub-table with the given rows, in the given order.
  DataTable select_rows(const std::vector<std::size_t>& rows) const {
    std::vector<Column> out;
    out.reserve(columns_.size());
    for (const auto& col : columns_) {
      Column c{col.name, col.kind, {}};
      c.values.reserve(rows.size());
      for (std::size_t r : rows) c.values.push_back(col.values.at(r));
      out.push_back(std::move(c));
    }
    return DataTable(std::move(out));
  }

  void validate() const {
    for (const auto& col : columns_) {
      if (col.values.size() != rows()) {
        throw DataError("column '" + col.name + "' has " +
                        std::to_string(col.values.size()) + " rows, expected " +
                        std::to_string(rows()));
      }
      for (std::size_t r = 0; r < col.values.size(); ++r) {
        const double v = col.values[r];
        if (!std::isfinite(v)) {
          throw DataError("column '" + col.name + "', row " + std::to_string(r) +
                          ": non-finite value");
        }
        if (col.kind.type == ColumnKind::Type::kCategorical &&
            (v < 0 || v >= static_cast<double>(col.kind.levels.size()) ||
             v != std::floor(v))) {
          throw DataError("column '" + col.name + "', row " + std::to_string(r) +
                          ": invalid level index");
        }
      }
      if (col.kind.type == ColumnKind::Type::kCategorical &&
          col.kind.levels.size() < 2) {
        throw DataError("column '" + col.name + "': categorical needs >= 2 levels");
      }
    }
  }

 private:
  std::vector<Column> columns_;
};

/// Disjoint split of a table into the hold-out and to-be-privatized rows.
/// Both are fixed once drawn.
struct SamplePartition {
  DataTable holdout;
  DataTable to_privatize;
  std::vector<std::size_t> holdout_rows;
  std::vector<std::size_t> release_rows;
};

/// Hold-out size m = round(ratio * N); requires N >= 4, m >= 2 and n >= 1.
inline std::pair<std::size_t, std::size_t> partition_sizes(std::size_t total,
                                                           double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("hold-out ratio must lie in (0, 1)");
  }
  if (total < 4) throw std::invalid_argument("need at least 4 records");
  const auto m = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));
  if (m < 2 || m >= total) {
    throw std::invalid_argument("hold-out ratio gives a degenerate partition");
  }
  return {m, total - m};
}

/// Random partition drawn by a seeded Fisher-Yates shuffle; row order
/// within each part follows the input.
inline SamplePartition split_sample(const DataTable& table, double ratio,
                                    std::uint64_t seed) {
  const std::size_t total = table.rows();
  const auto [m, n] = partition_sizes(total, ratio);
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RandomStream rng = RandomStream::derive(seed, StreamDomain::kPartition, 0);
  for (std::size_t i = total - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<bool> in_holdout(total, false);
  for (std::size_t k = 0; k < m; ++k) in_holdout[perm[k]] = true;
  SamplePartition part;
  for (std::size_t r = 0; r < total; ++r) {
    (in_holdout[r] ? part.holdout_rows : part.release_rows).push_back(r);
  }
  part.holdout = table.select_rows(part.holdout_rows);
  part.to_privatize = table.select_rows(part.release_rows);
  return part;
}

}  // namespace dip

#endif  // DIP_TABLE_HPP_
