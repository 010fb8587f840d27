#pragma once

#include <complex>
#include <vector>

#include "fracbinom/distribution.hpp"
#include "fracbinom/quadrature.hpp"

namespace fracbinom {

// The unit complex numbers e^{i theta}, -pi < theta <= pi, whose principal
// alpha-th power is 1. The first entry is always exactly 1.
struct RootsOfUnity {
  double alpha = 1.0;
  std::vector<std::complex<double>> omegas;
};

RootsOfUnity roots_of_unity(double alpha);

// Half-width of the interval around 0 on which the explicit characteristic
// function formula holds: 2 pi for integer alpha, otherwise pi times the
// distance from alpha to the nearest even integer.
struct CfValidity {
  double theta_alpha = 0.0;

  bool contains(double xi) const { return xi > -theta_alpha && xi < theta_alpha; }
};

double theta_alpha(double alpha);
CfValidity cf_validity(double alpha);

// True when alpha is within 1e-3 of an integer without being one (to 1e-12).
// The sin(alpha pi) correction terms are then evaluated but ill-conditioned.
bool near_integer_conditioning(double alpha);

template <class T>
struct ExplicitValue {
  T value{};
  bool near_integer_warning = false;
};

// Right-hand side of the generalized binomial theorem,
//   sum_{w in K_alpha} (1 + lambda w)^{alpha n}
//   - (alpha lambda^alpha sin(alpha pi) / pi) * integral_0^1 t^{alpha-1}
//     (1-t)^{alpha n} [1/|t^alpha - lambda^alpha e^{-i alpha pi}|^2
//                      + lambda^{alpha n}/|e^{-i alpha pi} - (lambda t)^alpha|^2] dt,
// which equals alpha * sum_j binom(alpha n, alpha j) lambda^{alpha j}.
// The integral term is zero for integer alpha. The log variant never
// overflows; the ω = 1 term is factored out of the sum.
ExplicitValue<double> log_gbt_rhs(double alpha, int n, double lambda,
                                  const QuadratureConfig& cfg = {});
ExplicitValue<double> gbt_rhs(double alpha, int n, double lambda,
                              const QuadratureConfig& cfg = {});

// E[e^{xi S}] summed over the table.
double log_mgf_direct(const DistributionTable& table, double xi);
double mgf_direct(const DistributionTable& table, double xi);

// Closed-form moment generating function through the generalized binomial
// theorem with lambda = x e^{xi/alpha} / (1 - x). Requires 0 < x < 1.
ExplicitValue<double> log_mgf_explicit(const Params& params, double xi,
                                       const QuadratureConfig& cfg = {});
ExplicitValue<double> mgf_explicit(const Params& params, double xi,
                                   const QuadratureConfig& cfg = {});

// E[e^{i xi S}] summed over the table.
std::complex<double> cf_direct(const DistributionTable& table, double xi);

// Closed-form characteristic function, valid for |xi| < theta_alpha(alpha):
//   Z phi(xi) = sum_{w in K_alpha} (1 - x + x w e^{i xi/alpha})^{alpha n}
//     - (alpha sin(alpha pi)/pi) integral_0^1 t^{alpha-1} (1-t)^{alpha n}
//       [x^a (1-x)^{a(n+1)} e^{i xi} / (psi1 psi2)
//        + x^{a(n+1)} (1-x)^a e^{i xi (n-1)} / (psi3 psi4)] dt
// with psi1,2 = (t(1-x))^a - x^a e^{i(xi -/+ a pi)} and
// psi3,4 = (1-x)^a e^{-i(xi +/- a pi)} - (tx)^a. Throws DomainError outside
// the validity interval.
ExplicitValue<std::complex<double>> cf_explicit(const Params& params, double xi,
                                                const QuadratureConfig& cfg = {});

// A real number stored as sign * exp(log_abs); sign is 0 for exact zero.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 0;

  double value() const;
};

// Z - 1 from the expansion of Z through the generalized binomial theorem,
// evaluated without forming Z (so it stays accurate far below 1e-16).
// Requires 0 < x < 1.
SignedLog z_minus_one(const Params& params, const QuadratureConfig& cfg = {});

}  // namespace fracbinom
