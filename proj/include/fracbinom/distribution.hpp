#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fracbinom/specfun.hpp"

namespace fracbinom {

// Parameters (alpha, x, n) of one fractional binomial distribution.
struct Params {
  double alpha = 1.0;
  double x = 0.5;
  int n = 1;

  // Throws DomainError unless alpha > 0, 0 <= x <= 1 and n >= 1.
  void validate() const;
  // Throws DomainError unless additionally 0 < x < 1.
  void validate_interior() const;
};

// Immutable log-domain table of the fractional binomial law on {0, ..., n}.
//
// log_weights[j] = log alpha + log binom(alpha n, alpha j)
//                  + alpha j log x + alpha (n - j) log(1 - x),
// with 0^0 = 1 at the endpoints x = 0 and x = 1. log_z is the
// log-sum-exp of the weights.
class DistributionTable {
 public:
  explicit DistributionTable(const Params& params);

  const Params& params() const { return params_; }
  int n() const { return params_.n; }

  std::span<const double> log_weights() const { return log_weights_; }
  double log_z() const { return log_z_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }

  LogReal log_pmf(int j) const;
  double pmf(int j) const;

  // P(S <= j) for j = 0..n; the last entry is exactly 1.
  std::span<const double> cdf() const { return cdf_; }

  // log P(S >= j0) and log P(S <= j0), 0 <= j0 <= n.
  LogReal log_upper_tail(int j0) const;
  LogReal log_lower_tail(int j0) const;

  // Inverse-CDF draws; the seed -> stream mapping is fixed (SplitMix64
  // seeding of std::mt19937_64, 53-bit uniforms).
  std::vector<int> sample(std::uint64_t seed, std::size_t count) const;

 private:
  void check_index(int j, const char* op) const;

  Params params_;
  std::vector<double> log_weights_;
  std::vector<double> log_pmf_;
  std::vector<double> cdf_;
  double log_z_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

DistributionTable build_distribution(const Params& params);

// log Z by direct log-sum-exp over the n + 1 weights.
double log_normalizing_constant(const Params& params);

// Law of X / alpha with X ~ Bin(floor(alpha n), x), supported on k / alpha.
class LatticeTable {
 public:
  explicit LatticeTable(const Params& params);

  const Params& params() const { return params_; }
  // floor(alpha n), the number of Bernoulli trials.
  int trials() const { return trials_; }

  std::span<const double> support() const { return support_; }
  std::span<const double> log_pmf() const { return log_pmf_; }
  double pmf(int k) const;
  // P(T <= support[k]); the last entry is exactly 1.
  std::span<const double> cdf() const { return cdf_; }

  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  Params params_;
  int trials_ = 0;
  std::vector<double> support_;
  std::vector<double> log_pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

LatticeTable build_nu(const Params& params);

// floor(alpha n), treating products within 1e-9 of an integer as exact.
int lattice_trials(double alpha, int n);

}  // namespace fracbinom
