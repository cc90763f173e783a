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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "dip/dip.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260417;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!ok || detail.size() < 600) {
      detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "FAILED ") + what;
    }
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void add_checks(Outcome& o, const std::vector<dip::CheckResult>& checks) {
  for (const auto& c : checks) o.require(c.pass, c.name + " (" + c.detail + ")");
}

Outcome exact_preservation() {
  Outcome o;
  const std::vector<dip::ParametricDistribution> dists{
      dip::ParametricDistribution::bernoulli(0.3),
      dip::ParametricDistribution::binomial(5, 0.5)};
  for (const auto& dist : dists) {
    const dip::JumpSpec spec = dip::jump_spec(dist);
    for (double eps : {0.5, 1.0, 4.0}) {
      const auto oracle = dip::brute_force_output_distribution(spec, eps, 10000);
      double worst = 0.0;
      for (std::size_t k = 0; k < spec.points.size(); ++k) {
        worst = std::max(worst, std::abs(oracle.pmf[k] - spec.masses[k]));
      }
      o.require(worst <= 1e-4, dist.name() + " eps=" + fmt(eps) + " oracle max delta " +
                                   fmt(worst, 3));
      const std::size_t draws = 1000000;
      std::vector<double> input(draws);
      dip::RandomStream rng = dip::RandomStream::derive(
          kSeed, dip::StreamDomain::kData, static_cast<std::uint64_t>(eps * 10), spec.points.size());
      for (auto& v : input) v = dist.sample_one(rng);
      const auto out = dip::privatize_known(input, dist, eps,
                                            dip::SeededStreams{kSeed + static_cast<std::uint64_t>(eps * 10)});
      double worst_z = 0.0;
      for (std::size_t k = 0; k < spec.points.size(); ++k) {
        const double freq =
            static_cast<double>(std::count(out.begin(), out.end(), spec.points[k])) /
            static_cast<double>(draws);
        const double p = oracle.pmf[k];
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
        worst_z = std::max(worst_z, std::abs(freq - p) / se);
      }
      o.require(worst_z <= 3.0, dist.name() + " eps=" + fmt(eps) + " simulation max |z| " +
                                    fmt(worst_z, 3));
    }
  }
  return o;
}

Outcome continuous_ks() {
  Outcome o;
  dip::ExperimentConfig c;
  c.n = 1000;
  c.reps = 200;
  c.epsilons = {1.0};
  c.seed = kSeed;
  const auto report = dip::run_continuous_ks_experiment(c);
  add_checks(o, dip::check_continuous_ks(report, 1.0));
  return o;
}

Outcome discrete_mean() {
  Outcome o;
  dip::ExperimentConfig c;
  c.n = 1000;
  c.reps = 200;
  c.epsilons = {1.0, 2.0, 3.0, 4.0};
  c.distributions = {"bernoulli"};
  c.seed = kSeed;
  const auto report = dip::run_discrete_mean_experiment(c);
  add_checks(o, dip::check_discrete_mean(report));
  return o;
}

Outcome regression() {
  Outcome o;
  dip::ExperimentConfig c;
  c.N = 2000;
  c.p = 6;
  c.reps = 200;
  c.epsilons = {1.0};
  c.holdout_ratios = {0.25};
  c.seed = kSeed;
  const auto report = dip::run_regression_experiment(c);
  add_checks(o, dip::check_regression(report, 1.0, 0.25));
  return o;
}

Outcome ratio_bound() {
  Outcome o;
  dip::RandomStream rng = dip::RandomStream::derive(kSeed, dip::StreamDomain::kAudit, 0);
  const auto holdout = dip::sample(dip::ParametricDistribution::normal(0.0, 1.0), rng, 500);
  const dip::ContinualizedCdf chat = dip::continualized_edf(holdout);
  const std::vector<dip::ParametricDistribution> dists{
      dip::ParametricDistribution::uniform(0.0, 1.0),
      dip::ParametricDistribution::normal(0.0, 1.0),
      dip::ParametricDistribution::exponential(1.0),
      dip::ParametricDistribution::binomial(5, 0.5)};
  for (double eps : {0.1, 1.0, 3.0}) {
    const double bound = std::exp(eps) * (1.0 + 1e-9);
    for (const auto& d : dists) {
      const double r = dip::density_ratio_bound_check(d, eps);
      o.require(r <= bound, d.name() + " eps=" + fmt(eps) + " ratio " + fmt(r, 8));
    }
    const double r = dip::density_ratio_bound_check(chat, eps);
    o.require(r <= bound, "C-hat(m=500) eps=" + fmt(eps) + " ratio " + fmt(r, 8));
    std::vector<double> per;
    for (int l = 0; l < 5; ++l) per.push_back(dip::density_ratio_bound_check(chat, eps / 5.0));
    const double composed = dip::compose_ratio_bounds(per);
    o.require(composed <= bound, "p=5 composed eps=" + fmt(eps) + " ratio " + fmt(composed, 8));
  }
  return o;
}

Outcome power_bound() {
  Outcome o;
  for (std::size_t m : {1, 5, 20}) {
    const auto p = dip::repeated_query_power(m, 0.1, 0.05, 10000, kSeed);
    const double limit = p.bound + 3.0 * p.standard_error;
    o.require(p.power <= limit, "M=" + std::to_string(m) + " power " + fmt(p.power) +
                                    " limit " + fmt(limit));
  }
  return o;
}

Outcome linear_counterexample() {
  Outcome o;
  const double eps = 1.0;
  const auto lap = dip::linear_mechanism_counterexample(eps, dip::LaplaceScale(1.0), 10.0);
  o.require(lap.ratio > std::exp(eps), "laplace ratio " + fmt(lap.ratio));
  const auto gauss = dip::linear_mechanism_counterexample(
      eps, dip::ParametricDistribution::normal(0.0, 1.0), 5.0);
  o.require(gauss.ratio > std::exp(eps), "gaussian ratio " + fmt(gauss.ratio));
  return o;
}

Outcome dependence() {
  Outcome o;
  dip::ExperimentConfig c;
  c.N = 20000;
  c.p = 2;
  c.rho = 0.8;
  c.reps = 1;
  c.epsilons = {2.0};
  c.holdout_ratios = {0.25};
  c.lrm_bound = 4.0;
  c.seed = kSeed;
  const auto report = dip::run_dependence_experiment(c);
  add_checks(o, dip::check_dependence(report, 0.8, 2.0, 0.25));
  return o;
}

double median_seconds(const dip::DataTable& table, const dip::ReleaseConfig& rc) {
  std::vector<double> t;
  for (int run = 0; run < 3; ++run) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = dip::privatize_table(table, rc);
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (r.table.rows() == 0) std::abort();
  }
  std::sort(t.begin(), t.end());
  return t[1];
}

Outcome scaling() {
  Outcome o;
  dip::ReleaseConfig rc;
  rc.epsilon = 1.0;
  rc.seed = kSeed;
  dip::RandomStream rng = dip::RandomStream::derive(kSeed, dip::StreamDomain::kData, 9);
  const auto small = dip::gaussian_data(100000, 5, 0.5, rng);
  const auto large = dip::gaussian_data(200000, 5, 0.5, rng);
  const double a = median_seconds(small, rc);
  const double b = median_seconds(large, rc);
  o.require(b / a <= 2.4, "N=1e5 " + fmt(a, 3) + "s, N=2e5 " + fmt(b, 3) + "s, factor " +
                              fmt(b / a, 3));
  return o;
}

Outcome determinism_and_confidentiality() {
  Outcome o;
  dip::RandomStream rng = dip::RandomStream::derive(kSeed, dip::StreamDomain::kData, 10);
  const auto table = dip::gaussian_data(2000, 3, 0.6, rng);
  dip::ReleaseConfig rc;
  rc.epsilon = 1.0;
  rc.seed = kSeed;
  const auto render = [&](unsigned workers) {
    rc.workers = workers;
    std::ostringstream os;
    const auto r = dip::privatize_table(table, rc);
    dip::write_csv(os, r.table);
    return os.str() + dip::format_metadata(r.metadata);
  };
  const std::string first = render(1);
  o.require(first == render(1), "repeat run byte-identical");
  o.require(first == render(4), "4 workers byte-identical to 1");
  std::size_t matches = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    dip::RandomStream g = dip::RandomStream::derive(kSeed, dip::StreamDomain::kData, 100 + run);
    const auto data = dip::gaussian_data(400, 2, 0.5, g);
    dip::ReleaseConfig cfg;
    cfg.epsilon = 1.0;
    cfg.seed = kSeed + run;
    const auto part = dip::split_sample(data, cfg.holdout_ratio, cfg.seed);
    std::unordered_set<double> raw;
    for (const auto& col : part.holdout.columns()) raw.insert(col.values.begin(), col.values.end());
    const auto out = dip::privatize_table(data, cfg);
    for (const auto& col : out.table.columns()) {
      for (double v : col.values) matches += raw.count(v);
    }
  }
  o.require(matches == 0, "hold-out values found in output over 100 runs: " +
                              std::to_string(matches));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact preservation oracle", 60, exact_preservation},
      {2, "continuous KS table", 300, continuous_ks},
      {3, "discrete mean table", 300, discrete_mean},
      {4, "regression table", 600, regression},
      {5, "density ratio bound", 60, ratio_bound},
      {6, "repeated-query power bound", 120, power_bound},
      {7, "linear mechanism counterexample", 1, linear_counterexample},
      {8, "dependence preservation", 120, dependence},
      {9, "N log N scaling", 300, scaling},
      {10, "determinism and hold-out confidentiality", 300, determinism_and_confidentiality},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.limit_seconds,
              "runtime " + fmt(secs, 3) + "s < " + fmt(c.limit_seconds) + "s");
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
