#include "fracbinom/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fracbinom/error.hpp"
#include "fracbinom/summation.hpp"

namespace fracbinom {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// exponent * log_base with 0 * log 0 = 0 (the 0^0 = 1 convention).
double log_power(double exponent, double log_base) {
  return exponent == 0.0 ? 0.0 : exponent * log_base;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

std::vector<double> running_cdf(std::span<const double> pmf) {
  std::vector<double> cdf(pmf.size());
  CompensatedSum acc;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    acc.add(pmf[j]);
    cdf[j] = std::clamp(acc.value(), 0.0, 1.0);
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

struct Moments {
  double mean;
  double variance;
};

// Two-pass: mean first, then the centred second moment.
Moments two_pass_moments(std::span<const double> points,
                         std::span<const double> pmf) {
  CompensatedSum first;
  for (std::size_t i = 0; i < points.size(); ++i) first.add(pmf[i] * points[i]);
  const double mean = first.value();
  CompensatedSum second;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = points[i] - mean;
    second.add(pmf[i] * d * d);
  }
  return {mean, second.value()};
}

std::vector<double> compute_log_weights(const Params& p) {
  const double log_x = std::log(p.x);
  const double log_1mx = std::log1p(-p.x);
  const double log_alpha = std::log(p.alpha);
  const double w = p.alpha * p.n;
  std::vector<double> lw(static_cast<std::size_t>(p.n) + 1);
  for (int j = 0; j <= p.n; ++j) {
    const double aj = p.alpha * j;
    const double a_rest = p.alpha * (p.n - j);
    const double lx = log_power(aj, log_x);
    const double l1mx = log_power(a_rest, log_1mx);
    if (lx == kNegInf || l1mx == kNegInf) {
      lw[j] = kNegInf;
      continue;
    }
    lw[j] = log_alpha + log_gen_binom(w, std::min(aj, w)) + lx + l1mx;
  }
  return lw;
}

}  // namespace

void Params::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be a positive finite real, got " +
                      std::to_string(alpha));
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("x must lie in [0, 1], got " + std::to_string(x));
  }
  if (n < 1) {
    throw DomainError("n must be a positive integer, got " + std::to_string(n));
  }
}

void Params::validate_interior() const {
  validate();
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("x must lie in the open interval (0, 1), got " +
                      std::to_string(x));
  }
}

DistributionTable::DistributionTable(const Params& params) : params_(params) {
  params_.validate();
  log_weights_ = compute_log_weights(params_);
  log_z_ = log_sum_exp(log_weights_);

  const std::size_t size = log_weights_.size();
  log_pmf_.resize(size);
  std::vector<double> pmf(size);
  std::vector<double> points(size);
  for (std::size_t j = 0; j < size; ++j) {
    log_pmf_[j] = log_weights_[j] - log_z_;
    pmf[j] = std::exp(log_pmf_[j]);
    points[j] = static_cast<double>(j);
  }
  cdf_ = running_cdf(pmf);
  const Moments m = two_pass_moments(points, pmf);
  mean_ = m.mean;
  variance_ = m.variance;
}

void DistributionTable::check_index(int j, const char* op) const {
  if (j < 0 || j > params_.n) {
    throw DomainError(std::string(op) + ": index " + std::to_string(j) +
                      " outside [0, " + std::to_string(params_.n) + "]");
  }
}

LogReal DistributionTable::log_pmf(int j) const {
  check_index(j, "log_pmf");
  return log_pmf_[static_cast<std::size_t>(j)];
}

double DistributionTable::pmf(int j) const { return std::exp(log_pmf(j)); }

LogReal DistributionTable::log_upper_tail(int j0) const {
  check_index(j0, "log_upper_tail");
  return log_sum_exp(std::span<const double>(log_pmf_).subspan(
      static_cast<std::size_t>(j0)));
}

LogReal DistributionTable::log_lower_tail(int j0) const {
  check_index(j0, "log_lower_tail");
  return log_sum_exp(std::span<const double>(log_pmf_).first(
      static_cast<std::size_t>(j0) + 1));
}

std::vector<int> DistributionTable::sample(std::uint64_t seed,
                                           std::size_t count) const {
  std::vector<int> out;
  out.reserve(count);
  std::uint64_t state = seed;
  std::mt19937_64 engine(splitmix64(state));
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(engine() >> 11U) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    out.push_back(static_cast<int>(it - cdf_.begin()));
  }
  return out;
}

DistributionTable build_distribution(const Params& params) {
  return DistributionTable(params);
}

double log_normalizing_constant(const Params& params) {
  params.validate();
  return log_sum_exp(compute_log_weights(params));
}

int lattice_trials(double alpha, int n) {
  const double prod = alpha * n;
  const double nearest = std::round(prod);
  if (std::fabs(prod - nearest) <= 1e-9 * std::max(1.0, prod)) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::floor(prod));
}

LatticeTable::LatticeTable(const Params& params) : params_(params) {
  params_.validate();
  trials_ = lattice_trials(params_.alpha, params_.n);
  const double log_x = std::log(params_.x);
  const double log_1mx = std::log1p(-params_.x);
  const std::size_t size = static_cast<std::size_t>(trials_) + 1;
  support_.resize(size);
  log_pmf_.resize(size);
  std::vector<double> pmf(size);
  for (int k = 0; k <= trials_; ++k) {
    support_[k] = k / params_.alpha;
    const double lx = log_power(k, log_x);
    const double l1mx = log_power(trials_ - k, log_1mx);
    log_pmf_[k] = (lx == kNegInf || l1mx == kNegInf)
                      ? kNegInf
                      : log_gen_binom(trials_, k) + lx + l1mx;
  }
  // Renormalize so rounding in log_gen_binom does not leave mass != 1; at
  // alpha = 1 this makes the table bitwise equal to the fractional one.
  const double log_z = log_sum_exp(log_pmf_);
  for (std::size_t k = 0; k < size; ++k) {
    log_pmf_[k] -= log_z;
    pmf[k] = std::exp(log_pmf_[k]);
  }
  cdf_ = running_cdf(pmf);
  const Moments m = two_pass_moments(support_, pmf);
  mean_ = m.mean;
  variance_ = m.variance;
}

double LatticeTable::pmf(int k) const {
  if (k < 0 || k > trials_) {
    throw DomainError("LatticeTable::pmf: index " + std::to_string(k) +
                      " outside [0, " + std::to_string(trials_) + "]");
  }
  return std::exp(log_pmf_[static_cast<std::size_t>(k)]);
}

LatticeTable build_nu(const Params& params) { return LatticeTable(params); }

}  // namespace fracbinom
