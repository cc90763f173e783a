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

#ifndef DIP_METRICS_HPP_
#define DIP_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "dip/distributions.hpp"

namespace dip {

/// sup_x |edf(x) - F(x)|, checking both one-sided gaps at each sorted
/// sample point.
template <class Cdf>
double ks_distance(std::span<const double> sample, const Cdf& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

inline double ks_distance(std::span<const double> sample,
                          const ParametricDistribution& dist) {
  return ks_distance(sample, [&](double x) { return dist.cdf(x); });
}

/// Dense column-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
  std::span<double> column(std::size_t j) { return {data.data() + j * rows, rows}; }
  std::span<const double> column(std::size_t j) const {
    return {data.data() + j * rows, rows};
  }
};

/// Least squares by column-pivoted Householder QR. Throws on a
/// rank-deficient design.
inline std::vector<double> ols_fit(const Matrix& a, const std::vector<double>& y) {
  const std::size_t n = a.rows;
  const std::size_t p = a.cols;
  if (y.size() != n) throw std::invalid_argument("ols_fit: response length mismatch");
  if (p == 0 || n < p) throw std::invalid_argument("ols_fit: need rows >= cols >= 1");
  const Eigen::Map<const Eigen::MatrixXd> x(a.data.data(), static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(p));
  const Eigen::Map<const Eigen::VectorXd> b(y.data(), static_cast<Eigen::Index>(n));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-12);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    throw std::invalid_argument("ols_fit: design is rank deficient");
  }
  const Eigen::VectorXd beta = qr.solve(b);
  return {beta.data(), beta.data() + beta.size()};
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l2_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation: need matching samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Mean and standard error (sample SD / sqrt(n)).
struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
    s.se = s.sd / std::sqrt(n);
  }
  return s;
}

}  // namespace dip

#endif  // DIP_METRICS_HPP_
