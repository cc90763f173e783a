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

// dip: command-line front end for privatizing CSV files, running the
// benchmark scenarios and the privacy audits.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dip/dip.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheck = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dip::DataError("cannot write '" + path + "'");
  out << text;
}

dip::ParametricDistribution parse_distribution(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw UsageError("empty distribution");
  std::vector<double> args;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    double v;
    if (!dip::detail::parse_double(parts[i], v)) {
      throw UsageError("bad distribution parameter '" + parts[i] + "'");
    }
    args.push_back(v);
  }
  const auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw UsageError("distribution '" + parts[0] + "' takes " + std::to_string(k) +
                       " parameter(s)");
    }
  };
  const std::string& f = parts[0];
  if (f == "uniform") { need(2); return dip::ParametricDistribution::uniform(args[0], args[1]); }
  if (f == "normal") { need(2); return dip::ParametricDistribution::normal(args[0], args[1]); }
  if (f == "exponential") { need(1); return dip::ParametricDistribution::exponential(args[0]); }
  if (f == "beta") { need(2); return dip::ParametricDistribution::beta(args[0], args[1]); }
  if (f == "bernoulli") { need(1); return dip::ParametricDistribution::bernoulli(args[0]); }
  if (f == "binomial") {
    need(2);
    return dip::ParametricDistribution::binomial(static_cast<int>(args[0]), args[1]);
  }
  if (f == "poisson") { need(1); return dip::ParametricDistribution::poisson(args[0]); }
  if (f == "geometric") { need(1); return dip::ParametricDistribution::geometric(args[0]); }
  throw UsageError("unknown distribution '" + f + "'");
}

// ---------------------------------------------------------------------------
// privatize
// ---------------------------------------------------------------------------

struct PrivatizeOptions {
  std::string input;
  std::string output;
  std::string metadata;
  std::string schema;
  bool accept_suggested = false;
  double epsilon = 0.0;
  double holdout_ratio = 0.25;
  std::optional<std::uint64_t> seed;
  std::string order;
  std::string mechanism = "dip";
  unsigned workers = 1;
};

dip::DataTable baseline_release(const dip::DataTable& table, const PrivatizeOptions& o,
                                std::string& meta) {
  const double share = o.epsilon / static_cast<double>(table.cols());
  std::vector<dip::Column> cols;
  std::ostringstream os;
  os << "mechanism=" << o.mechanism << "\nepsilon=" << dip::detail::format_double(o.epsilon)
     << "\nepsilon_per_column=" << dip::detail::format_double(share)
     << "\nreleased_rows=" << table.rows() << "\nseed=" << *o.seed << "\n";
  for (std::size_t c = 0; c < table.cols(); ++c) {
    const dip::Column& src = table.column(c);
    dip::SeededStreams streams{*o.seed, dip::StreamDomain::kRelease, c};
    dip::Column out{src.name, src.kind, {}};
    if (o.mechanism == "lrm") {
      if (src.kind.type == dip::ColumnKind::Type::kCategorical) {
        throw dip::DataError("column '" + src.name + "': lrm does not handle categorical data");
      }
      const auto bounds = src.kind.type == dip::ColumnKind::Type::kContinuous
                              ? dip::BoundsSpec::symmetric(src.values)
                              : dip::BoundsSpec::nonnegative(src.values);
      std::vector<double> grid;
      if (src.kind.type == dip::ColumnKind::Type::kDiscrete) grid = src.kind.support;
      out.values = dip::lrm_privatize(src.values, share, bounds, streams, grid);
      if (src.kind.type == dip::ColumnKind::Type::kDiscrete && grid.empty()) {
        out.kind = dip::ColumnKind::continuous();
      }
      os << "bounds." << src.name << "=" << dip::detail::format_double(bounds.lower) << ","
         << dip::detail::format_double(bounds.upper) << "\n";
    } else {
      std::vector<double> support;
      if (src.kind.type == dip::ColumnKind::Type::kCategorical) {
        for (std::size_t l = 0; l < src.kind.levels.size(); ++l) support.push_back(l);
      } else if (src.kind.type == dip::ColumnKind::Type::kDiscrete) {
        support = src.kind.support.empty() ? src.values : src.kind.support;
      } else {
        throw dip::DataError("column '" + src.name + "': exm needs discrete or categorical data");
      }
      const auto d = dip::exm_probabilities(support, src.values, share);
      out.values = dip::exm_sample_discrete(support, src.values, share, streams);
      os << "sensitivity." << src.name << "=" << dip::detail::format_double(d.sensitivity)
         << "\n";
    }
    cols.push_back(std::move(out));
  }
  meta = os.str();
  return dip::DataTable(std::move(cols));
}

int run_privatize(const PrivatizeOptions& o) {
  if (!o.seed) throw UsageError("--seed is required");
  const dip::RawCsv csv = dip::read_csv(o.input);
  std::vector<dip::ColumnSchema> schema;
  if (!o.schema.empty()) {
    schema = dip::parse_schema(o.schema);
  } else if (o.accept_suggested) {
    schema = dip::suggest_schema(csv);
    std::cerr << "using suggested schema: " << dip::format_schema(schema) << "\n";
  } else {
    throw UsageError("--schema is required (or --accept-suggested-schema)");
  }
  const dip::DataTable table = dip::to_table(csv, schema);
  std::string meta;
  dip::DataTable released;
  if (o.mechanism == "dip") {
    dip::ReleaseConfig rc;
    rc.epsilon = o.epsilon;
    rc.holdout_ratio = o.holdout_ratio;
    rc.seed = *o.seed;
    rc.workers = o.workers;
    for (const auto& name : split(o.order, ',')) {
      try {
        rc.order.push_back(table.column_index(name));
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--order: ") + e.what());
      }
    }
    dip::Release r;
    try {
      r = dip::privatize_table(table, rc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    released = std::move(r.table);
    meta = dip::format_metadata(r.metadata);
  } else if (o.mechanism == "lrm" || o.mechanism == "exm") {
    released = baseline_release(table, o, meta);
  } else {
    throw UsageError("unknown mechanism '" + o.mechanism + "'");
  }
  std::ostringstream body;
  dip::write_csv(body, released);
  write_text(o.output, body.str());
  const std::string meta_path =
      !o.metadata.empty() ? o.metadata : (o.output.empty() || o.output == "-" ? "" : o.output + ".meta");
  if (!meta_path.empty()) {
    write_text(meta_path, meta);
  } else {
    std::cerr << meta;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string scenario;
  std::string eps;
  std::string holdout;
  std::size_t reps = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> N;
  std::optional<std::size_t> p;
  std::string dists;
  double rho = 0.8;
  bool check = false;
  std::string output;
  std::string csv;
  unsigned workers = 1;
};

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    double v;
    if (!dip::detail::parse_double(item, v)) throw UsageError(flag + ": bad value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int run_simulate(const SimulateOptions& o) {
  if (!o.seed) throw UsageError("--seed is required");
  dip::ExperimentConfig c;
  c.scenario = o.scenario;
  c.reps = o.reps;
  c.seed = *o.seed;
  c.workers = o.workers;
  c.rho = o.rho;
  c.distributions = split(o.dists, ',');
  if (!o.eps.empty()) c.epsilons = parse_list(o.eps, "--eps");
  if (!o.holdout.empty()) c.holdout_ratios = parse_list(o.holdout, "--holdout-ratio");
  if (o.n) c.n = *o.n;
  if (o.p) c.p = *o.p;
  if (o.N) c.N = *o.N;
  dip::BenchReport report;
  std::vector<dip::CheckResult> checks;
  try {
    if (o.scenario == "continuous-ks") {
      report = dip::run_continuous_ks_experiment(c);
      if (o.check) checks = dip::check_continuous_ks(report);
    } else if (o.scenario == "discrete-mean") {
      report = dip::run_discrete_mean_experiment(c);
      if (o.check) checks = dip::check_discrete_mean(report);
    } else if (o.scenario == "regression") {
      report = dip::run_regression_experiment(c);
      if (o.check) checks = dip::check_regression(report);
    } else if (o.scenario == "dependence") {
      if (!o.p) c.p = 2;
      if (!o.N) c.N = 20000;
      if (o.eps.empty()) c.epsilons = {2.0};
      report = dip::run_dependence_experiment(c);
      if (o.check) checks = dip::check_dependence(report, c.rho, c.epsilons.front());
    } else {
      throw UsageError("unknown scenario '" + o.scenario + "'");
    }
  } catch (const std::out_of_range& e) {
    throw UsageError(std::string("--check needs the reference cells: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::string text = report.text();
  bool ok = true;
  for (const auto& k : checks) {
    text += std::string(k.pass ? "PASS " : "FAIL ") + k.name + "  " + k.detail + "\n";
    ok = ok && k.pass;
  }
  write_text(o.output, text);
  if (!o.csv.empty()) write_text(o.csv, report.csv());
  return ok ? kExitOk : kExitCheck;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditOptions {
  std::string target;
  double epsilon = 1.0;
  std::string dist;
  std::uint64_t seed = 0;
  std::size_t sims = 10000;
  std::size_t nodes = 10000;
  std::string releases = "1,5,20";
  double gamma = 0.05;
  std::string output;
};

dip::AuditReport run_audit_target(const AuditOptions& o) {
  dip::AuditReport r;
  r.target = o.target;
  r.epsilon = o.epsilon;
  r.seed = o.seed;
  const double bound = std::exp(o.epsilon) * (1.0 + 1e-9);
  if (o.target == "ratio-bound") {
    const auto dist = parse_distribution(o.dist.empty() ? "uniform:0:1" : o.dist);
    const double ratio = dip::density_ratio_bound_check(dist, o.epsilon);
    r.lines.push_back({"max density ratio " + dist.name(), ratio, bound, ratio <= bound});
    dip::RandomStream rng =
        dip::RandomStream::derive(o.seed, dip::StreamDomain::kAudit, 0, 0);
    const auto holdout = dip::sample(dip::ParametricDistribution::normal(0.0, 1.0), rng, 500);
    const double r2 = dip::density_ratio_bound_check(dip::continualized_edf(holdout), o.epsilon);
    r.lines.push_back({"max density ratio empirical (m=500)", r2, bound, r2 <= bound});
  } else if (o.target == "oracle") {
    const auto dist = parse_distribution(o.dist.empty() ? "bernoulli:0.3" : o.dist);
    const dip::JumpSpec spec = dip::jump_spec(dist);
    const auto out = dip::brute_force_output_distribution(spec, o.epsilon, o.nodes);
    double worst = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < spec.points.size(); ++k) {
      worst = std::max(worst, std::abs(out.pmf[k] - spec.masses[k]));
      total += out.pmf[k];
    }
    r.lines.push_back({"max pmf delta " + dist.name(), worst, 1e-4, worst <= 1e-4});
    r.lines.push_back({"pmf total - 1", std::abs(total - 1.0), 1e-6,
                       std::abs(total - 1.0) <= 1e-6});
    r.lines.push_back({"quadrature convergence delta", out.convergence_delta, 1e-5,
                       out.convergence_delta <= 1e-5});
  } else if (o.target == "power") {
    for (const auto& m : parse_list(o.releases, "--releases")) {
      const auto p = dip::repeated_query_power(static_cast<std::size_t>(m), o.epsilon,
                                               o.gamma, o.sims, o.seed);
      const double limit = p.bound + 3.0 * p.standard_error;
      r.lines.push_back({"power M=" + std::to_string(p.releases), p.power, limit,
                         p.power <= limit});
    }
  } else if (o.target == "linear-counterexample") {
    const auto lap = dip::linear_mechanism_counterexample(
        o.epsilon, dip::LaplaceScale(1.0), 10.0);
    r.lines.push_back({"laplace(b=1) ratio at |z-z'|=10 exceeds e^eps", lap.ratio,
                       std::exp(o.epsilon), lap.exceeds_bound});
    const auto gauss = dip::linear_mechanism_counterexample(
        o.epsilon, dip::ParametricDistribution::normal(0.0, 1.0), 5.0);
    r.lines.push_back({"gaussian(sd=1) ratio at |z-z'|=5 exceeds e^eps", gauss.ratio,
                       std::exp(o.epsilon), gauss.exceeds_bound});
  } else {
    throw UsageError("unknown audit target '" + o.target + "'");
  }
  return r;
}

int run_audit(const AuditOptions& o) {
  dip::AuditReport r;
  try {
    r = run_audit_target(o);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_text(o.output, r.text());
  return r.passed() ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-invariant differentially private data release"};
  app.require_subcommand(1);

  PrivatizeOptions po;
  auto* priv = app.add_subcommand("privatize", "privatize a CSV file");
  priv->add_option("--input", po.input, "input CSV")->required()->check(CLI::ExistingFile);
  priv->add_option("--output", po.output, "output CSV ('-' for stdout)")->required();
  priv->add_option("--metadata", po.metadata, "run metadata path (default: OUTPUT.meta)");
  priv->add_option("--schema", po.schema, "column kinds, e.g. x:continuous,y:discrete(auto)");
  priv->add_flag("--accept-suggested-schema", po.accept_suggested,
                 "privatize with the auto-detected schema");
  priv->add_option("--eps", po.epsilon, "total privacy budget")
      ->required()
      ->check(CLI::PositiveNumber);
  priv->add_option("--holdout-ratio", po.holdout_ratio, "hold-out fraction")
      ->check(CLI::Range(0.0, 1.0));
  priv->add_option("--seed", po.seed, "random seed (required)");
  priv->add_option("--order", po.order, "comma-separated column privatization order");
  priv->add_option("--mechanism", po.mechanism, "dip | lrm | exm")
      ->check(CLI::IsMember({"dip", "lrm", "exm"}));
  priv->add_option("--workers", po.workers, "worker threads")->check(CLI::PositiveNumber);

  std::string suggest_input;
  auto* suggest = app.add_subcommand("suggest-schema", "print a suggested schema for a CSV");
  suggest->add_option("--input", suggest_input, "input CSV")->required()->check(CLI::ExistingFile);

  SimulateOptions so;
  auto* sim = app.add_subcommand("simulate", "run a benchmark scenario");
  sim->add_option("scenario", so.scenario,
                  "continuous-ks | discrete-mean | regression | dependence")
      ->required();
  sim->add_option("--eps", so.eps, "comma-separated epsilons");
  sim->add_option("--holdout-ratio", so.holdout, "comma-separated hold-out ratios");
  sim->add_option("--reps", so.reps, "replications")->check(CLI::PositiveNumber);
  sim->add_option("--seed", so.seed, "random seed (required)");
  sim->add_option("--n", so.n, "sample size (univariate scenarios)");
  sim->add_option("--N", so.N, "total records (multivariate scenarios)");
  sim->add_option("--p", so.p, "covariates or dimensions");
  sim->add_option("--dists", so.dists, "comma-separated distribution labels");
  sim->add_option("--rho", so.rho, "correlation (dependence)");
  sim->add_flag("--check", so.check, "exit 3 unless the reference tolerances hold");
  sim->add_option("--output", so.output, "text report path (default stdout)");
  sim->add_option("--csv", so.csv, "CSV report path");
  sim->add_option("--workers", so.workers, "worker threads")->check(CLI::PositiveNumber);

  AuditOptions ao;
  auto* audit = app.add_subcommand("audit", "run a privacy audit");
  audit->add_option("target", ao.target,
                    "ratio-bound | oracle | power | linear-counterexample")
      ->required();
  audit->add_option("--eps", ao.epsilon, "privacy budget")->check(CLI::PositiveNumber);
  audit->add_option("--dist", ao.dist, "distribution, e.g. bernoulli:0.3");
  audit->add_option("--seed", ao.seed, "random seed");
  audit->add_option("--sims", ao.sims, "Monte-Carlo simulations (power)");
  audit->add_option("--nodes", ao.nodes, "quadrature nodes (oracle)");
  audit->add_option("--releases", ao.releases, "comma-separated release counts (power)");
  audit->add_option("--gamma", ao.gamma, "test level (power)");
  audit->add_option("--output", ao.output, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*priv) return run_privatize(po);
    if (*suggest) {
      std::cout << dip::format_schema(dip::suggest_schema(dip::read_csv(suggest_input)))
                << "\n";
      return kExitOk;
    }
    if (*sim) return run_simulate(so);
    if (*audit) return run_audit(ao);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dip::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
