#pragma once

#include <complex>

namespace fracbinom {

// Log of a nonnegative quantity. -inf encodes an exact zero; NaN never
// appears for valid inputs.
using LogReal = double;

// Tolerance used to decide that a real parameter is an integer.
inline constexpr double kIntegerTolerance = 1e-12;

bool is_near_integer(double v, double tol = kIntegerTolerance);

// log Gamma(s) for s > 0. Throws DomainError otherwise.
double log_gamma(double s);

// log of Gamma(w+1) / (Gamma(z+1) Gamma(w-z+1)) on 0 <= z <= w, where the
// coefficient is strictly positive.
LogReal log_gen_binom(double w, double z);

// Standard normal distribution function.
double std_normal_cdf(double z);

// base^exponent on the principal branch, exp(exponent * Log base) with
// Log 1 = 0. Integer exponents use exact repeated multiplication so that
// nonpositive real bases are allowed for them; otherwise a nonpositive real
// base is a DomainError.
std::complex<double> principal_pow(std::complex<double> base, double exponent);

}  // namespace fracbinom
