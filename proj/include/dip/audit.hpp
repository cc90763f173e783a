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

#ifndef DIP_AUDIT_HPP_
#define DIP_AUDIT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dip/continualize.hpp"
#include "dip/distributions.hpp"
#include "dip/noise.hpp"
#include "dip/random.hpp"

namespace dip {

/// One checked quantity in an audit report.
struct AuditLine {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct AuditReport {
  std::string target;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<AuditLine> lines;

  bool passed() const {
    return std::all_of(lines.begin(), lines.end(),
                       [](const AuditLine& l) { return l.pass; });
  }

  std::string text() const {
    std::ostringstream os;
    os.precision(10);
    os << "audit " << target << " epsilon=" << epsilon << " seed=" << seed << "\n";
    for (const auto& l : lines) {
      os << "  " << (l.pass ? "PASS " : "FAIL ") << l.name << " value=" << l.value
         << " bound=" << l.bound << "\n";
    }
    os << (passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Density ratio bound
// ---------------------------------------------------------------------------

/// max over (w, z, z') of f(w | z) / f(w | z') for W = F(z) + Laplace(0, 1/eps),
/// given the forward values F(z) on a grid of z. The w grid spans
/// [-1, 2] with `w_points` points.
inline double density_ratio_from_forward(const std::vector<double>& forward,
                                         double epsilon, std::size_t w_points = 100) {
  if (forward.empty()) throw std::invalid_argument("empty forward grid");
  if (w_points < 10) throw std::invalid_argument("need >= 10 w points");
  const LaplaceScale scale = LaplaceScale::for_epsilon(epsilon);
  double worst = 0.0;
  for (std::size_t k = 0; k < w_points; ++k) {
    const double w = -1.0 + 3.0 * static_cast<double>(k) / static_cast<double>(w_points - 1);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (double f : forward) {
      const double ld = laplace_log_density(w - f, scale);
      hi = std::max(hi, ld);
      lo = std::min(lo, ld);
    }
    worst = std::max(worst, hi - lo);
  }
  return std::exp(worst);
}

/// z grid: `points` interior quantiles for a parametric F, support points
/// for finite discrete families.
inline double density_ratio_bound_check(const ParametricDistribution& dist,
                                        double epsilon, std::size_t points = 50) {
  if (points < 10) throw std::invalid_argument("need >= 10 grid points");
  std::vector<double> forward;
  const Support s = dist.support();
  if (dist.is_discrete() && std::isfinite(s.hi)) {
    for (double z = s.lo; z <= s.hi; z += 1.0) forward.push_back(dist.cdf(z));
  } else {
    for (std::size_t k = 0; k < points; ++k) {
      const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
      forward.push_back(dist.cdf(dist.inverse_cdf(u)));
    }
    forward.push_back(0.0);
    forward.push_back(1.0);
  }
  return density_ratio_from_forward(forward, epsilon, 2 * points);
}

/// z grid: evenly spaced over [d_0, d_m].
inline double density_ratio_bound_check(const ContinualizedCdf& cdf, double epsilon,
                                        std::size_t points = 50) {
  if (points < 10) throw std::invalid_argument("need >= 10 grid points");
  std::vector<double> forward;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(points - 1);
    forward.push_back(cdf.evaluate(cdf.lower() + t * (cdf.upper() - cdf.lower())));
  }
  return density_ratio_from_forward(forward, epsilon, 2 * points);
}

/// Sequential composition of per-coordinate ratio bounds.
inline double compose_ratio_bounds(const std::vector<double>& per_coordinate) {
  double total = 1.0;
  for (double r : per_coordinate) total *= r;
  return total;
}

// ---------------------------------------------------------------------------
// Brute-force output distribution
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::array<double, 5> kGaussNodes{
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights{
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

/// P(output = a_k) for every atom, conditional on the continualized forward
/// value x = F_V(V). The mechanism's output is monotone in e, so the
/// breakpoint between atoms j and j+1 is found by bisection on e in
/// [-40b, 40b]; mass beyond the window goes to the extreme atoms.
inline void conditional_pmf(const ContinualizedCdf& cdf, double x, LaplaceScale scale,
                            std::vector<double>& pmf) {
  const std::vector<double>& atoms =
      std::get<GeneralizedCeiling>(cdf.ceiling_map()).support();
  const double window = 40.0 * scale.b();
  const auto output = [&](double e) {
    return cdf.ceiling(cdf.inverse(convolved_cdf(x + e, scale)));
  };
  double previous = 0.0;
  for (std::size_t j = 0; j + 1 < atoms.size(); ++j) {
    double cut;
    if (output(window) <= atoms[j]) {
      cut = 1.0;
    } else if (output(-window) > atoms[j]) {
      cut = 0.0;
    } else {
      double lo = -window;
      double hi = window;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * scale.b(); ++it) {
        const double mid = 0.5 * (lo + hi);
        (output(mid) <= atoms[j] ? lo : hi) = mid;
      }
      cut = laplace_cdf(0.5 * (lo + hi), scale);
    }
    pmf[j] += cut - previous;
    previous = cut;
  }
  pmf.back() += 1.0 - previous;
}

inline std::vector<double> integrate_output_pmf(const JumpSpec& spec,
                                                const ContinualizedCdf& cdf,
                                                LaplaceScale scale,
                                                std::size_t panels) {
  const std::size_t atoms = spec.points.size();
  std::vector<double> pmf(atoms, 0.0);
  std::vector<double> cond(atoms);
  // For z = a_k, F_V(V) is uniform on (F(a_{k-1}), F(a_k)].
  double lower = 0.0;
  for (std::size_t k = 0; k < atoms; ++k) {
    const double upper = cdf.values()[k + 1];
    const double width = (upper - lower) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = lower + width * static_cast<double>(p);
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double x = a + 0.5 * width * (kGaussNodes[g] + 1.0);
        std::fill(cond.begin(), cond.end(), 0.0);
        conditional_pmf(cdf, x, scale, cond);
        const double w = 0.5 * width * kGaussWeights[g];
        for (std::size_t j = 0; j < atoms; ++j) pmf[j] += w * cond[j];
      }
    }
    lower = upper;
  }
  return pmf;
}

}  // namespace detail

struct OutputDistribution {
  std::vector<double> pmf;
  double convergence_delta = 0.0;  // vs. half the nodes
};

/// Output pmf of the known-F discrete mechanism by deterministic
/// integration over the continualization uniform and the Laplace noise.
/// Throws if the result moves by more than 1e-5 when the node count halves.
inline OutputDistribution brute_force_output_distribution(const JumpSpec& spec,
                                                          double epsilon,
                                                          std::size_t nodes = 10000) {
  spec.validate();
  if (nodes < 1000) throw std::invalid_argument("need >= 1000 quadrature nodes");
  const LaplaceScale scale = LaplaceScale::for_epsilon(epsilon);
  OutputDistribution out;
  if (spec.points.size() == 1) {
    out.pmf = {1.0};
    return out;
  }
  const ContinualizedCdf cdf = continualize_discrete(spec);
  const std::size_t per_atom =
      std::max<std::size_t>(2, nodes / (detail::kGaussNodes.size() * spec.points.size()));
  out.pmf = detail::integrate_output_pmf(spec, cdf, scale, per_atom);
  const auto coarse = detail::integrate_output_pmf(spec, cdf, scale, per_atom / 2);
  for (std::size_t j = 0; j < out.pmf.size(); ++j) {
    out.convergence_delta =
        std::max(out.convergence_delta, std::abs(out.pmf[j] - coarse[j]));
  }
  if (out.convergence_delta > 1e-5) {
    throw std::runtime_error("brute-force quadrature did not converge");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Repeated-query power
// ---------------------------------------------------------------------------

struct PowerResult {
  std::size_t releases = 0;
  double power = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;  // gamma * e^{M epsilon}
};

/// Monte-Carlo power of the Neyman-Pearson test of mu0 vs mu1 from M
/// independent releases of one Uniform(0, 1) record with F(mu0) = 0 and
/// F(mu1) = 1. The release map is a bijection of W = F(z) + e, so the test
/// uses T = eps * sum(|w - F(mu0)| - |w - F(mu1)|). The randomized
/// critical value is calibrated on 10 * sims null draws.
inline PowerResult repeated_query_power(std::size_t M, double epsilon, double gamma,
                                        std::size_t sims, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
  if (sims < 1000) throw std::invalid_argument("need >= 1000 simulations");
  PowerResult r;
  r.releases = M;
  r.bound = gamma * std::exp(static_cast<double>(M) * epsilon);
  if (M == 0) {
    r.power = gamma;
    return r;
  }
  const LaplaceScale scale = LaplaceScale::for_epsilon(epsilon);
  const auto statistic = [&](double forward, std::uint64_t domain_offset,
                             std::size_t sim) {
    RandomStream draws = RandomStream::derive(seed, StreamDomain::kAudit, sim,
                                              domain_offset);
    double t = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      const double w = forward + draws.laplace(scale.b());
      t += std::abs(w) - std::abs(w - 1.0);
    }
    return epsilon * t;
  };
  const std::size_t calibration = 10 * sims;
  std::vector<double> null(calibration);
  for (std::size_t s = 0; s < calibration; ++s) null[s] = statistic(0.0, 1, s);
  std::sort(null.begin(), null.end());
  const double tol = 1e-9 * epsilon;
  const std::size_t idx =
      static_cast<std::size_t>(std::floor((1.0 - gamma) * static_cast<double>(calibration)));
  const double c = null[std::min(idx, calibration - 1)];
  const auto above = std::count_if(null.begin(), null.end(),
                                   [&](double t) { return t > c + tol; });
  const auto at = std::count_if(null.begin(), null.end(),
                                [&](double t) { return std::abs(t - c) <= tol; });
  const double target = gamma * static_cast<double>(calibration);
  const double randomize =
      at == 0 ? 0.0
              : std::clamp((target - static_cast<double>(above)) / static_cast<double>(at),
                           0.0, 1.0);
  double hits = 0.0;
  for (std::size_t s = 0; s < sims; ++s) {
    const double t = statistic(1.0, 2, s);
    if (t > c + tol) {
      hits += 1.0;
    } else if (std::abs(t - c) <= tol) {
      hits += randomize;
    }
  }
  r.power = hits / static_cast<double>(sims);
  r.standard_error = std::sqrt(std::max(r.power * (1.0 - r.power), 1e-12) /
                               static_cast<double>(sims));
  return r;
}

// ---------------------------------------------------------------------------
// Linear mechanism counterexample
// ---------------------------------------------------------------------------

struct CounterexampleResult {
  double log_ratio = 0.0;
  double ratio = 1.0;
  double w_at_max = 0.0;
  bool exceeds_bound = false;  // ratio > e^epsilon
};

using AdditiveNoise = std::variant<LaplaceScale, ParametricDistribution>;

/// Largest density ratio f(w - z) / f(w - z') of the additive mechanism
/// z + noise for z = 0, z' = probe, scanning w over [-probe, 2 probe]
/// (or [-1, 1] when probe = 0).
inline CounterexampleResult linear_mechanism_counterexample(double epsilon,
                                                            const AdditiveNoise& noise,
                                                            double probe,
                                                            std::size_t points = 20001) {
  const auto log_density = [&](double x) {
    return std::visit(
        [x](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, LaplaceScale>) {
            return laplace_log_density(x, n);
          } else {
            return n.log_pdf(x);
          }
        },
        noise);
  };
  const double span = probe == 0.0 ? 1.0 : std::abs(probe);
  const double lo = std::min(0.0, probe) - span;
  const double hi = std::max(0.0, probe) + span;
  CounterexampleResult r;
  r.log_ratio = -std::numeric_limits<double>::infinity();
  const auto consider = [&](double w) {
    const double lr = log_density(w) - log_density(w - probe);
    if (lr > r.log_ratio) {
      r.log_ratio = lr;
      r.w_at_max = w;
    }
  };
  for (std::size_t k = 0; k < points; ++k) {
    consider(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  consider(0.0);
  consider(probe);
  r.ratio = std::exp(r.log_ratio);
  r.exceeds_bound = r.log_ratio > epsilon;
  return r;
}

}  // namespace dip

#endif  // DIP_AUDIT_HPP_
