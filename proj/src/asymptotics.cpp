#include "fracbinom/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracbinom/error.hpp"
#include "fracbinom/parallel.hpp"
#include "fracbinom/specfun.hpp"
#include "fracbinom/summation.hpp"

namespace fracbinom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnap = 1e-9;

void check_alpha_x(double alpha, double x, const char* op) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(op) + ": alpha must be positive and finite");
  }
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(op) + ": x must lie in (0, 1)");
  }
}

// v * log(v / w) with 0 log 0 = 0.
double relative_entropy_term(double v, double log_v_over_w_base) {
  return v == 0.0 ? 0.0 : v * log_v_over_w_base;
}

// ceil / floor that treat values within kSnap (relative) of an integer as
// that integer, so n z = 60 does not become 61 through rounding noise.
long snapped_ceil(double v) {
  const double r = std::round(v);
  if (std::fabs(v - r) <= kSnap * std::max(1.0, std::fabs(v))) {
    return static_cast<long>(r);
  }
  return static_cast<long>(std::ceil(v));
}

long snapped_floor(double v) {
  const double r = std::round(v);
  if (std::fabs(v - r) <= kSnap * std::max(1.0, std::fabs(v))) {
    return static_cast<long>(r);
  }
  return static_cast<long>(std::floor(v));
}

// log P(S >= j0) (upper) or log P(S <= j0) (lower), with out-of-range
// thresholds mapped to the empty set or the whole support.
double log_tail(const DistributionTable& table, long j0, TailMode mode) {
  const long n = table.n();
  if (mode == TailMode::upper) {
    if (j0 > n) return -kInf;
    return table.log_upper_tail(static_cast<int>(std::max(j0, 0L)));
  }
  if (j0 < 0) return -kInf;
  return table.log_lower_tail(static_cast<int>(std::min(j0, n)));
}

void check_grid(const std::vector<int>& grid, const char* op) {
  if (grid.empty()) throw DomainError(std::string(op) + ": empty n grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw DomainError(std::string(op) + ": n must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw DomainError(std::string(op) + ": n grid must be strictly increasing");
    }
  }
}

}  // namespace

void RateQuery::validate() const { check_alpha_x(alpha, x, "RateQuery"); }

double rate_ldp(const RateQuery& q) {
  q.validate();
  const double z = q.z;
  if (!(z >= 0.0 && z <= 1.0)) return kInf;
  const double up = relative_entropy_term(z, std::log(z) - std::log(q.x));
  const double down =
      relative_entropy_term(1.0 - z, std::log1p(-z) - std::log1p(-q.x));
  return q.alpha * (up + down);
}

double rate_mdp(const RateQuery& q) {
  q.validate();
  return q.alpha * q.z * q.z / (2.0 * q.x * (1.0 - q.x));
}

double lambda_limit(double alpha, double x, double xi) {
  check_alpha_x(alpha, x, "lambda_limit");
  return alpha * log_add(std::log1p(-x), std::log(x) + xi / alpha);
}

double fenchel_legendre(double alpha, double x, double z) {
  check_alpha_x(alpha, x, "fenchel_legendre");
  if (!(z >= 0.0 && z <= 1.0)) return kInf;
  if (z == 0.0) return -alpha * std::log1p(-x);
  if (z == 1.0) return -alpha * std::log(x);
  const double xi_star =
      alpha * (std::log(z) - std::log(x) + std::log1p(-x) - std::log1p(-z));
  return xi_star * z - lambda_limit(alpha, x, xi_star);
}

DeviationReport ldp_empirical(double alpha, double x, double z,
                              const std::vector<int>& n_grid, TailMode mode,
                              unsigned threads) {
  check_alpha_x(alpha, x, "ldp_empirical");
  check_grid(n_grid, "ldp_empirical");
  if (mode == TailMode::upper && !(z > x && z < 1.0)) {
    throw DomainError("ldp_empirical: upper-tail mode needs x < z < 1");
  }
  if (mode == TailMode::lower && !(z > 0.0 && z < x)) {
    throw DomainError("ldp_empirical: lower-tail mode needs 0 < z < x");
  }
  const double theoretical = rate_ldp({alpha, x, z});
  DeviationReport report;
  report.rows.resize(n_grid.size());
  parallel_for(n_grid.size(), threads, [&](std::size_t i) {
    const int n = n_grid[i];
    const DistributionTable table(Params{alpha, x, n});
    const double v = n * z;
    const long j0 = mode == TailMode::upper ? snapped_ceil(v) : snapped_floor(v);
    const double empirical = -log_tail(table, j0, mode) / n;
    report.rows[i] = {n, empirical, theoretical,
                      std::fabs(empirical - theoretical)};
  });
  return report;
}

void ModerateScale::validate() const {
  if (!(beta > 0.5 && beta < 1.0)) {
    throw DomainError("ModerateScale: beta must lie in (0.5, 1)");
  }
  check_grid(grid, "ModerateScale");
}

DeviationReport mdp_empirical(double alpha, double x, double a,
                              const ModerateScale& scale, unsigned threads) {
  check_alpha_x(alpha, x, "mdp_empirical");
  scale.validate();
  if (a == 0.0 || !std::isfinite(a)) {
    throw DomainError("mdp_empirical: a must be finite and nonzero");
  }
  const TailMode mode = a > 0.0 ? TailMode::upper : TailMode::lower;
  const double theoretical = rate_mdp({alpha, x, a});
  DeviationReport report;
  report.rows.resize(scale.grid.size());
  parallel_for(scale.grid.size(), threads, [&](std::size_t i) {
    const int n = scale.grid[i];
    const DistributionTable table(Params{alpha, x, n});
    const double c_n = std::pow(static_cast<double>(n), scale.beta);
    const double v = n * x + c_n * a;
    const long j0 = mode == TailMode::upper ? snapped_ceil(v) : snapped_floor(v);
    const double empirical = -(n / (c_n * c_n)) * log_tail(table, j0, mode);
    report.rows[i] = {n, empirical, theoretical,
                      std::fabs(empirical - theoretical)};
  });
  return report;
}

double berry_esseen_sup(const DistributionTable& table) {
  const Params& p = table.params();
  if (!(p.x > 0.0 && p.x < 1.0) || !(table.variance() > 0.0)) {
    throw DomainError("berry_esseen_sup: degenerate variance (x must lie in (0, 1))");
  }
  const double mean = table.mean();
  const double sd = std::sqrt(table.variance());
  const auto cdf = table.cdf();
  double sup = 0.0;
  double left = 0.0;
  for (int j = 0; j <= table.n(); ++j) {
    const double phi = std_normal_cdf((j - mean) / sd);
    const double right = cdf[static_cast<std::size_t>(j)];
    sup = std::max({sup, std::fabs(left - phi), std::fabs(right - phi)});
    left = right;
  }
  return sup;
}

double sup_distance_mu_nu(const Params& params) {
  params.validate_interior();
  const DistributionTable mu(params);
  const LatticeTable nu(params);
  const auto f_mu = mu.cdf();
  const auto g_nu = nu.cdf();
  const auto nu_points = nu.support();

  // Merge the two increasing jump sets; coincident points form one group.
  std::size_t i = 0;
  std::size_t k = 0;
  const std::size_t mu_size = f_mu.size();
  const std::size_t nu_size = g_nu.size();
  double f = 0.0;
  double g = 0.0;
  double sup = 0.0;
  while (i < mu_size || k < nu_size) {
    const double pm = i < mu_size ? static_cast<double>(i) : kInf;
    const double pn = k < nu_size ? nu_points[k] : kInf;
    const double p = std::min(pm, pn);
    const double close = 1e-12 * std::max(1.0, std::fabs(p));
    sup = std::max(sup, std::fabs(f - g));
    if (i < mu_size && pm - p <= close) f = f_mu[i++];
    if (k < nu_size && pn - p <= close) g = g_nu[k++];
    sup = std::max(sup, std::fabs(f - g));
  }
  return sup;
}

double moment_diff(const Params& params, int m) {
  params.validate_interior();
  if (m < 1) throw DomainError("moment_diff: m must be at least 1");
  const double n = params.n;
  if (m * std::log(std::max(n, 2.0)) > 700.0) {
    throw NumericalError("moment_diff: n^m overflows double precision (n = " +
                         std::to_string(params.n) + ", m = " +
                         std::to_string(m) + ")");
  }
  const DistributionTable mu(params);
  const LatticeTable nu(params);
  const double c = n * params.x;

  // central[i] = E_mu[(S-c)^i] - E_nu[(T-c)^i], i = 1..m.
  std::vector<CompensatedSum> central(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= params.n; ++j) {
    const double w = mu.pmf(j);
    const double d = j - c;
    double power = 1.0;
    for (int e = 1; e <= m; ++e) {
      power *= d;
      central[e].add(w * power);
    }
  }
  const auto support = nu.support();
  for (int k = 0; k <= nu.trials(); ++k) {
    const double w = nu.pmf(k);
    const double d = support[static_cast<std::size_t>(k)] - c;
    double power = 1.0;
    for (int e = 1; e <= m; ++e) {
      power *= d;
      central[e].add(-w * power);
    }
  }
  CompensatedSum total;
  double binom = 1.0;
  for (int e = 1; e <= m; ++e) {
    binom = binom * (m - e + 1) / e;
    total.add(binom * std::pow(c, m - e) * central[e].value());
  }
  return total.value();
}

}  // namespace fracbinom
