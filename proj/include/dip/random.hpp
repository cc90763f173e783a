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

#ifndef DIP_RANDOM_HPP_
#define DIP_RANDOM_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace dip {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Stream domains keep draws for hold-out continualization, released
/// records and harness data generation from ever sharing a stream.
enum class StreamDomain : std::uint64_t {
  kRelease = 1,
  kHoldout = 2,
  kPartition = 3,
  kData = 4,
  kAudit = 5,
};

/// Counter-based generator: the n-th output of a stream is a pure function
/// of (key, n), so per-record streams give identical results regardless of
/// how records are scheduled across workers.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) : key_(detail::mix64(key)) {}

  /// Stream keyed by (seed, domain, record, coordinate).
  static RandomStream derive(std::uint64_t seed, StreamDomain domain,
                             std::uint64_t record, std::uint64_t coordinate = 0) {
    std::uint64_t k = detail::mix64(seed ^ detail::kGolden);
    k = detail::mix64(k + static_cast<std::uint64_t>(domain) * detail::kGolden);
    k = detail::mix64(k + record * 0xD6E8FEB86659FD93ULL);
    k = detail::mix64(k + coordinate * 0xA0761D6478BD642FULL + 1);
    return RandomStream(k);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    return detail::mix64(key_ + (++counter_) * detail::kGolden);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Laplace(0, scale) by inversion of a single uniform draw.
  double laplace(double scale) {
    const double u = uniform_open() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    return -scale * sign * std::log1p(-2.0 * std::abs(u));
  }

  /// Standard normal by Box-Muller (one output per call).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Anything the privatizers can pull a continualization uniform and a
/// Laplace draw from.
template <class D>
concept DrawSource = requires(D d, double scale) {
  { d.uniform() } -> std::convertible_to<double>;
  { d.laplace(scale) } -> std::convertible_to<double>;
};

/// Fixed draws for deterministic tests: every uniform is `u` and every
/// Laplace draw is `e` regardless of the scale.
struct FixedDraws {
  double u = 0.0;
  double e = 0.0;
  double uniform() const { return u; }
  double laplace(double) const { return e; }
};

/// Wraps a draw source and counts Laplace draws and the scales used.
template <DrawSource D>
class CountingDraws {
 public:
  explicit CountingDraws(D inner) : inner_(std::move(inner)) {}
  double uniform() { return inner_.uniform(); }
  double laplace(double scale) {
    scales_.push_back(scale);
    return inner_.laplace(scale);
  }
  const std::vector<double>& laplace_scales() const { return scales_; }

 private:
  D inner_;
  std::vector<double> scales_;
};

/// Factory handing out one independent stream per record.
struct SeededStreams {
  std::uint64_t seed = 0;
  StreamDomain domain = StreamDomain::kRelease;
  std::uint64_t coordinate = 0;
  RandomStream operator()(std::size_t record) const {
    return RandomStream::derive(seed, domain, record, coordinate);
  }
};

/// Factory returning the same fixed draws for every record.
struct FixedStreams {
  FixedDraws draws;
  FixedDraws operator()(std::size_t) const { return draws; }
};

inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) over `workers` threads in contiguous chunks.
/// The first exception thrown by any chunk is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2 * static_cast<std::size_t>(workers)) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dip

#endif  // DIP_RANDOM_HPP_
