#pragma once

#include <vector>

#include "fracbinom/distribution.hpp"

namespace fracbinom {

struct RateQuery {
  double alpha = 1.0;
  double x = 0.5;
  double z = 0.0;

  // Throws DomainError unless alpha > 0 and 0 < x < 1.
  void validate() const;
};

// alpha * (z log(z/x) + (1-z) log((1-z)/(1-x))) on [0, 1], +inf elsewhere.
double rate_ldp(const RateQuery& q);

// alpha z^2 / (2 x (1-x)).
double rate_mdp(const RateQuery& q);

// alpha log(1 - x + x e^{xi/alpha}).
double lambda_limit(double alpha, double x, double xi);

// sup_xi (xi z - lambda_limit(xi)), evaluated at the stationary point for
// z in (0, 1); the endpoint values are the limits xi -> -inf / +inf.
double fenchel_legendre(double alpha, double x, double z);

struct DeviationRow {
  int n = 0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double abs_error = 0.0;
};

struct DeviationReport {
  std::vector<DeviationRow> rows;
};

enum class TailMode { upper, lower };

// Upper mode (x < z < 1): empirical = -(1/n) log P(S >= ceil(n z)).
// Lower mode (0 < z < x): empirical = -(1/n) log P(S <= floor(n z)).
// threads = 0 uses all hardware threads; rows come back in grid order.
DeviationReport ldp_empirical(double alpha, double x, double z,
                              const std::vector<int>& n_grid,
                              TailMode mode = TailMode::upper,
                              unsigned threads = 1);

// c_n = n^beta.
struct ModerateScale {
  double beta = 0.7;
  std::vector<int> grid;

  // Throws DomainError unless 0.5 < beta < 1 and grid is strictly increasing
  // with positive entries.
  void validate() const;
};

// a > 0: empirical = -(n / c_n^2) log P(S >= ceil(n x + c_n a)).
// a < 0: the lower tail P(S <= floor(n x + c_n a)).
// An empty tail gives +inf.
DeviationReport mdp_empirical(double alpha, double x, double a,
                              const ModerateScale& scale, unsigned threads = 1);

// sup_z |F(z) - Phi(z)| for the standardized law (S - mean)/sd, exact over
// both one-sided limits at each jump.
double berry_esseen_sup(const DistributionTable& table);

// sup over the real line of |F_mu - G_nu|, nu the law of Bin(floor(alpha n), x)
// divided by alpha. Jump points closer than 1e-12 (relative) are merged.
double sup_distance_mu_nu(const Params& params);

// E_mu[S^m] - E_nu[T^m], expanded around c = n x:
//   sum_{i=1}^m binom(m, i) c^{m-i} (E_mu[(S-c)^i] - E_nu[(T-c)^i]).
// Throws NumericalError when n^m would overflow a double.
double moment_diff(const Params& params, int m);

}  // namespace fracbinom
