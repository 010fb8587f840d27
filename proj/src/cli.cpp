#include "fracbinom/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "fracbinom/asymptotics.hpp"
#include "fracbinom/distribution.hpp"
#include "fracbinom/error.hpp"
#include "fracbinom/parallel.hpp"
#include "fracbinom/summation.hpp"
#include "fracbinom/transforms.hpp"

namespace fracbinom {

namespace {

using nlohmann::ordered_json;

const std::vector<int> kDeviationGrid{100, 200, 400, 800, 1600};
const std::vector<int> kModerateGrid{400, 800, 1600, 3200, 6400};
const std::vector<int> kDoublingGrid{50, 100, 200, 400, 800, 1600, 3200, 6400};
const std::vector<int> kMomentGrid{50, 100, 200, 400};
const std::vector<double> kMgfXi{-2.0, -0.5, 0.0, 0.5, 2.0};
const std::vector<double> kCfFractions{-0.9, -0.5, -0.1, 0.1, 0.5, 0.9};

[[noreturn]] void reject(const std::string& flag, const std::string& why) {
  throw DomainError(flag + ": " + why);
}

void check_params(const ExperimentConfig& c, bool interior) {
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) {
    reject("--alpha", "must be positive and finite");
  }
  if (interior ? !(c.x > 0.0 && c.x < 1.0) : !(c.x >= 0.0 && c.x <= 1.0)) {
    reject("--x", interior ? "must lie in (0, 1)" : "must lie in [0, 1]");
  }
}

int require_n(const ExperimentConfig& c) {
  if (!c.n) reject("--n", "is required for " + c.subcommand);
  if (*c.n < 1) reject("--n", "must be a positive integer");
  return *c.n;
}

// --grid if given, else --n as a one-point grid, else the default.
std::vector<int> resolve_grid(const ExperimentConfig& c,
                              const std::vector<int>& fallback) {
  std::vector<int> grid = c.grid;
  if (grid.empty() && c.n) grid = {*c.n};
  if (grid.empty()) grid = fallback;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) reject("--grid", "entries must be positive integers");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      reject("--grid", "must be strictly increasing");
    }
  }
  return grid;
}

QuadratureConfig quadrature(const ExperimentConfig& c) {
  QuadratureConfig q;
  if (c.tol) {
    if (!(*c.tol > 0.0 && *c.tol < 1.0)) reject("--tol", "must lie in (0, 1)");
    q.rel_tol = *c.tol;
    // abs_tol is applied in units of the dominant term, so it is relative too.
    q.abs_tol = std::min(q.abs_tol, *c.tol);
  }
  return q;
}

ordered_json base_config(const ExperimentConfig& c) {
  return {{"subcommand", c.subcommand}, {"alpha", c.alpha}, {"x", c.x}};
}

ordered_json grid_json(const std::vector<int>& grid) {
  ordered_json arr = ordered_json::array();
  for (int n : grid) arr.push_back(n);
  return arr;
}

void warn_near_integer(const ExperimentConfig& c, std::ostream& diag) {
  if (near_integer_conditioning(c.alpha)) {
    diag << "warning: --alpha is within 1e-3 of an integer; the correction "
            "integral is ill-conditioned\n";
  }
}

Report run_pmf(const ExperimentConfig& c) {
  check_params(c, false);
  const int n = require_n(c);
  const DistributionTable table(Params{c.alpha, c.x, n});
  Report r;
  r.config = base_config(c);
  r.config["n"] = n;
  r.table.columns = {"j", "pmf", "log_pmf"};
  std::vector<std::uint64_t> counts;
  if (c.samples > 0) {
    r.config["samples"] = c.samples;
    r.config["seed"] = c.seed;
    r.table.columns.push_back("sample_freq");
    counts.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int j : table.sample(c.seed, c.samples)) ++counts[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j <= n; ++j) {
    std::vector<Cell> row{std::int64_t{j}, table.pmf(j), table.log_pmf(j)};
    if (c.samples > 0) {
      row.emplace_back(static_cast<double>(counts[static_cast<std::size_t>(j)]) /
                       static_cast<double>(c.samples));
    }
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

Report run_verify_gbt(const ExperimentConfig& c, std::ostream& diag) {
  check_params(c, true);
  const std::vector<int> grid = resolve_grid(c, {});
  if (grid.empty()) reject("--n", "is required for verify-gbt (or give --grid)");
  const QuadratureConfig q = quadrature(c);
  warn_near_integer(c, diag);
  const double lambda = c.x / (1.0 - c.x);
  std::vector<std::vector<Cell>> rows(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    const int n = grid[i];
    const double direct = log_normalizing_constant(Params{c.alpha, c.x, n});
    const double gbt = c.alpha * n * std::log1p(-c.x) +
                       log_gbt_rhs(c.alpha, n, lambda, q).value;
    rows[i] = {std::int64_t{n}, direct, gbt, std::fabs(std::expm1(gbt - direct))};
  });
  Report r;
  r.config = base_config(c);
  r.config["grid"] = grid_json(grid);
  r.config["rel_tol"] = q.rel_tol;
  r.table.columns = {"n", "direct_log_z", "gbt_log_z", "rel_err"};
  r.table.rows = std::move(rows);
  return r;
}

Report run_mgf_check(const ExperimentConfig& c, std::ostream& diag) {
  check_params(c, true);
  const int n = require_n(c);
  const QuadratureConfig q = quadrature(c);
  warn_near_integer(c, diag);
  const std::vector<double> xis = c.xi.empty() ? kMgfXi : c.xi;
  const Params p{c.alpha, c.x, n};
  const DistributionTable table(p);
  Report r;
  r.config = base_config(c);
  r.config["n"] = n;
  r.config["xi"] = xis;
  r.config["rel_tol"] = q.rel_tol;
  r.table.columns = {"xi", "direct", "explicit", "rel_err"};
  for (double xi : xis) {
    if (!std::isfinite(xi)) reject("--xi", "values must be finite");
    const double ld = log_mgf_direct(table, xi);
    const double le = log_mgf_explicit(p, xi, q).value;
    r.table.rows.push_back(
        {xi, std::exp(ld), std::exp(le), std::fabs(std::expm1(le - ld))});
  }
  return r;
}

Report run_cf_check(const ExperimentConfig& c, std::ostream& diag) {
  check_params(c, true);
  const int n = require_n(c);
  const QuadratureConfig q = quadrature(c);
  warn_near_integer(c, diag);
  const double theta = theta_alpha(c.alpha);
  std::vector<double> xis = c.xi;
  if (xis.empty()) {
    for (double f : kCfFractions) xis.push_back(f * theta);
  }
  for (double xi : xis) {
    if (!(std::fabs(xi) < theta)) {
      reject("--xi", "value " + std::to_string(xi) +
                         " outside the validity interval |xi| < " +
                         std::to_string(theta));
    }
  }
  const Params p{c.alpha, c.x, n};
  const DistributionTable table(p);
  Report r;
  r.config = base_config(c);
  r.config["n"] = n;
  r.config["xi"] = xis;
  r.config["rel_tol"] = q.rel_tol;
  r.table.columns = {"xi", "direct_re", "direct_im", "explicit_re", "explicit_im",
                     "abs_err"};
  for (double xi : xis) {
    const std::complex<double> d = cf_direct(table, xi);
    const std::complex<double> e = cf_explicit(p, xi, q).value;
    r.table.rows.push_back({xi, d.real(), d.imag(), e.real(), e.imag(), std::abs(e - d)});
  }
  return r;
}

void append_deviation_rows(const DeviationReport& report, Report& r) {
  r.table.columns = {"n", "empirical", "theoretical", "abs_error"};
  for (const auto& row : report.rows) {
    r.table.rows.push_back(
        {std::int64_t{row.n}, row.empirical, row.theoretical, row.abs_error});
  }
}

Report run_ldp(const ExperimentConfig& c) {
  check_params(c, true);
  if (!c.z) reject("--z", "is required for ldp");
  const double z = *c.z;
  if (!(z > 0.0 && z < 1.0)) reject("--z", "must lie in (0, 1)");
  if (z == c.x) reject("--z", "must differ from --x");
  const std::vector<int> grid = resolve_grid(c, kDeviationGrid);
  const TailMode mode = z > c.x ? TailMode::upper : TailMode::lower;
  Report r;
  r.config = base_config(c);
  r.config["z"] = z;
  r.config["tail"] = mode == TailMode::upper ? "upper" : "lower";
  r.config["grid"] = grid_json(grid);
  append_deviation_rows(ldp_empirical(c.alpha, c.x, z, grid, mode, c.threads), r);
  return r;
}

Report run_mdp(const ExperimentConfig& c) {
  check_params(c, true);
  if (!c.a) reject("--a", "is required for mdp");
  if (*c.a == 0.0 || !std::isfinite(*c.a)) reject("--a", "must be finite and nonzero");
  if (!(c.beta > 0.5 && c.beta < 1.0)) reject("--beta", "must lie in (0.5, 1)");
  const ModerateScale scale{c.beta, resolve_grid(c, kModerateGrid)};
  Report r;
  r.config = base_config(c);
  r.config["a"] = *c.a;
  r.config["beta"] = c.beta;
  r.config["grid"] = grid_json(scale.grid);
  append_deviation_rows(mdp_empirical(c.alpha, c.x, *c.a, scale, c.threads), r);
  return r;
}

// Shared by berry-esseen and compare-nu: a value per n, plus value * sqrt(n).
template <class Fn>
Report run_sqrt_n_profile(const ExperimentConfig& c, const char* value_column,
                          Fn&& value_at) {
  check_params(c, true);
  const std::vector<int> grid = resolve_grid(c, kDoublingGrid);
  std::vector<std::vector<Cell>> rows(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    const int n = grid[i];
    const double v = value_at(Params{c.alpha, c.x, n});
    rows[i] = {std::int64_t{n}, v, v * std::sqrt(static_cast<double>(n))};
  });
  Report r;
  r.config = base_config(c);
  r.config["grid"] = grid_json(grid);
  r.table.columns = {"n", value_column, "sup_sqrt_n"};
  r.table.rows = std::move(rows);
  return r;
}

template <class Points, class Weights>
double raw_moment(const Points& points, const Weights& pmf, int m) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < points.size(); ++i) {
    acc.add(pmf(i) * std::pow(points[i], m));
  }
  return acc.value();
}

Report run_moments(const ExperimentConfig& c) {
  check_params(c, true);
  if (c.m < 1 || c.m > 8) reject("--m", "must lie in 1..8");
  const std::vector<int> grid = resolve_grid(c, kMomentGrid);
  std::vector<std::vector<std::vector<Cell>>> blocks(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    const int n = grid[i];
    const Params p{c.alpha, c.x, n};
    const DistributionTable mu(p);
    const LatticeTable nu(p);
    std::vector<double> mu_points(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) mu_points[static_cast<std::size_t>(j)] = j;
    const auto nu_points = nu.support();
    for (int k = 1; k <= c.m; ++k) {
      const double mu_m = raw_moment(mu_points, [&](std::size_t j) {
        return mu.pmf(static_cast<int>(j));
      }, k);
      const double nu_m = raw_moment(nu_points, [&](std::size_t j) {
        return nu.pmf(static_cast<int>(j));
      }, k);
      const double diff = moment_diff(p, k);
      blocks[i].push_back({std::int64_t{n}, std::int64_t{k}, mu_m, nu_m, diff,
                           diff / std::pow(static_cast<double>(n), k - 1)});
    }
  });
  Report r;
  r.config = base_config(c);
  r.config["m"] = c.m;
  r.config["grid"] = grid_json(grid);
  r.table.columns = {"n", "m", "mu_moment", "nu_moment", "diff", "scaled_diff"};
  for (auto& block : blocks) {
    for (auto& row : block) r.table.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config, std::ostream& diag) {
  const auto start = std::chrono::steady_clock::now();
  if (config.output != "csv" && config.output != "json") {
    reject("--output", "must be csv or json");
  }
  const std::string& s = config.subcommand;
  Report r;
  if (s == "pmf") {
    r = run_pmf(config);
  } else if (s == "verify-gbt") {
    r = run_verify_gbt(config, diag);
  } else if (s == "mgf-check") {
    r = run_mgf_check(config, diag);
  } else if (s == "cf-check") {
    r = run_cf_check(config, diag);
  } else if (s == "ldp") {
    r = run_ldp(config);
  } else if (s == "mdp") {
    r = run_mdp(config);
  } else if (s == "berry-esseen") {
    r = run_sqrt_n_profile(config, "sup", [](const Params& p) {
      return berry_esseen_sup(DistributionTable(p));
    });
  } else if (s == "compare-nu") {
    r = run_sqrt_n_profile(config, "sup_distance",
                           [](const Params& p) { return sup_distance_mu_nu(p); });
  } else if (s == "moments") {
    r = run_moments(config);
  } else {
    reject("subcommand", "unknown subcommand '" + s + "'");
  }
  r.version = kVersion;
  if (config.timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  }
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fractional binomial distribution experiments", "fracbinom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  ExperimentConfig config;

  struct SubcommandInfo {
    const char* name;
    const char* help;
  };
  const SubcommandInfo subcommands[] = {
      {"pmf", "Probability mass function table"},
      {"verify-gbt", "Normalizing constant: direct sum against the binomial theorem"},
      {"mgf-check", "Moment generating function: direct against closed form"},
      {"cf-check", "Characteristic function: direct against closed form"},
      {"ldp", "Large deviation tail rates along an n grid"},
      {"mdp", "Moderate deviation tail rates along an n grid"},
      {"berry-esseen", "Kolmogorov distance to the normal law"},
      {"compare-nu", "Kolmogorov distance to the scaled binomial law"},
      {"moments", "Moment differences against the scaled binomial law"},
  };
  int n_value = 0;
  double z_value = 0.0;
  double a_value = 0.0;
  double tol_value = 0.0;
  for (const auto& info : subcommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    const std::string name = info.name;
    sub->add_option("--alpha", config.alpha, "Fractional exponent alpha > 0")->required();
    sub->add_option("--x", config.x, "Success parameter")->required();
    sub->add_option("--output", config.output, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", config.out_path, "Write the report to this file");
    sub->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
    sub->add_option("--tol", tol_value, "Relative quadrature tolerance");
    sub->add_flag("--timing", config.timing, "Record wall time in meta.runtime_ms");
    auto* n_opt = sub->add_option("--n", n_value, "Number of trials");
    if (name == "pmf" || name == "mgf-check" || name == "cf-check") {
      n_opt->required();
    }
    if (name != "pmf" && name != "mgf-check" && name != "cf-check") {
      sub->add_option("--grid", config.grid, "Comma-separated increasing n values")
          ->delimiter(',');
    }
    if (name == "pmf") {
      sub->add_option("--samples", config.samples, "Draw this many samples");
      sub->add_option("--seed", config.seed, "Seed for sampling");
    }
    if (name == "mgf-check" || name == "cf-check") {
      sub->add_option("--xi", config.xi, "Comma-separated xi values")->delimiter(',');
    }
    if (name == "ldp") sub->add_option("--z", z_value, "Tail threshold z")->required();
    if (name == "mdp") {
      sub->add_option("--a", a_value, "Moderate threshold a")->required();
      sub->add_option("--beta", config.beta, "Scale exponent, c_n = n^beta");
    }
    if (name == "moments") sub->add_option("--m", config.m, "Highest moment order");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.subcommand = chosen->get_name();
  if (chosen->count("--n") > 0) config.n = n_value;
  if (chosen->get_option_no_throw("--z") && chosen->count("--z") > 0) config.z = z_value;
  if (chosen->get_option_no_throw("--a") && chosen->count("--a") > 0) config.a = a_value;
  if (chosen->count("--tol") > 0) config.tol = tol_value;

  std::string text;
  try {
    const Report report = run_experiment(config, err);
    text = config.output == "json" ? to_json(report) : to_csv(report.table);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const QuadratureError& e) {
    err << "numerical failure: " << e.what() << " (error estimate "
        << e.error_estimate() << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }

  if (config.out_path.empty()) {
    out << text;
    out.flush();
    return 0;
  }
  std::ofstream file(config.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: --out: cannot open '" << config.out_path << "' for writing\n";
    return 2;
  }
  file << text;
  if (!file.flush()) {
    err << "error: --out: write to '" << config.out_path << "' failed\n";
    return 2;
  }
  return 0;
}

}  // namespace fracbinom
