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

#ifndef DIP_RANK_TREE_HPP_
#define DIP_RANK_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace dip::detail {

/// k-d tree over integer rank vectors answering L-infinity nearest-neighbour
/// queries. Ties go to the smallest point id.
class RankTree {
 public:
  RankTree() = default;

  /// `coords` is row-major: point q occupies [q * dims, (q + 1) * dims).
  RankTree(std::vector<std::int32_t> coords, std::size_t dims)
      : coords_(std::move(coords)), dims_(dims) {
    const std::size_t n = dims_ == 0 ? 0 : coords_.size() / dims_;
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    build(0, n, 0);
    // Store points in tree order so a search walks contiguous memory.
    std::vector<std::int32_t> laid(coords_.size());
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::copy_n(coords_.begin() + order_[pos] * dims_, dims_, laid.begin() + pos * dims_);
    }
    coords_ = std::move(laid);
  }

  std::size_t size() const { return order_.size(); }

  struct Hit {
    std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
    std::int64_t distance = std::numeric_limits<std::int64_t>::max();
  };

  Hit nearest(std::span<const std::int32_t> query) const {
    Hit best;
    if (!order_.empty()) search(0, order_.size(), 0, query, best);
    return best;
  }

 private:
  std::int32_t at(std::uint32_t id, std::size_t d) const {
    return coords_[id * dims_ + d];
  }

  static constexpr std::size_t kLeaf = 8;

  void build(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (hi - lo <= kLeaf) return;
    const std::size_t d = depth % dims_;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const auto va = at(a, d);
                       const auto vb = at(b, d);
                       return va != vb ? va < vb : a < b;
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
  }

  void consider(std::size_t pos, std::span<const std::int32_t> query,
                Hit& best) const {
    const std::uint32_t id = order_[pos];
    std::int64_t dist = 0;
    for (std::size_t d = 0; d < dims_; ++d) {
      const std::int64_t diff =
          std::llabs(static_cast<std::int64_t>(coords_[pos * dims_ + d]) - query[d]);
      if (diff > dist) {
        dist = diff;
        if (dist > best.distance) return;
      }
    }
    if (dist < best.distance || (dist == best.distance && id < best.id)) {
      best.distance = dist;
      best.id = id;
    }
  }

  void search(std::size_t lo, std::size_t hi, std::size_t depth,
              std::span<const std::int32_t> query, Hit& best) const {
    if (hi - lo <= kLeaf) {
      for (std::size_t pos = lo; pos < hi; ++pos) consider(pos, query, best);
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    consider(mid, query, best);
    const std::size_t d = depth % dims_;
    const std::int64_t split = coords_[mid * dims_ + d];
    const std::int64_t diff = static_cast<std::int64_t>(query[d]) - split;
    const bool left_first = diff <= 0;
    if (left_first) {
      search(lo, mid, depth + 1, query, best);
      if (diff >= -best.distance) search(mid + 1, hi, depth + 1, query, best);
    } else {
      search(mid + 1, hi, depth + 1, query, best);
      if (diff <= best.distance) search(lo, mid, depth + 1, query, best);
    }
  }

  std::vector<std::int32_t> coords_;  // by input id while building, then by tree position
  std::size_t dims_ = 0;
  std::vector<std::uint32_t> order_;
};

}  // namespace dip::detail

#endif  // DIP_RANK_TREE_HPP_
