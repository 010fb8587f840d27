#include "fracbinom/specfun.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "fracbinom/error.hpp"

namespace fracbinom {

bool is_near_integer(double v, double tol) {
  return std::isfinite(v) && std::fabs(v - std::round(v)) < tol;
}

double log_gamma(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(s));
  }
  // glibc's lgamma_r (fdlibm e_lgamma_r: rational fits near 1 and 2,
  // Stirling series for large s). Reentrant, unlike lgamma.
  int sign = 0;
  return ::lgamma_r(s, &sign);
}

LogReal log_gen_binom(double w, double z) {
  if (!(z >= 0.0) || !(z <= w) || !std::isfinite(w)) {
    throw DomainError("log_gen_binom: requires 0 <= z <= w, got w=" +
                      std::to_string(w) + " z=" + std::to_string(z));
  }
  return log_gamma(w + 1.0) - log_gamma(z + 1.0) - log_gamma(w - z + 1.0);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

namespace {

std::complex<double> integer_pow(std::complex<double> base, std::int64_t k) {
  const bool invert = k < 0;
  std::uint64_t e = invert ? static_cast<std::uint64_t>(-k)
                           : static_cast<std::uint64_t>(k);
  std::complex<double> result{1.0, 0.0};
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return invert ? 1.0 / result : result;
}

}  // namespace

std::complex<double> principal_pow(std::complex<double> base, double exponent) {
  if (!std::isfinite(exponent)) {
    throw DomainError("principal_pow: exponent must be finite");
  }
  const bool real_base = base.imag() == 0.0;
  if (std::trunc(exponent) == exponent && std::fabs(exponent) < 9.0e15) {
    if (real_base) {
      return {std::pow(base.real(), exponent), 0.0};
    }
    return integer_pow(base, static_cast<std::int64_t>(exponent));
  }
  if (real_base) {
    if (base.real() <= 0.0) {
      throw DomainError(
          "principal_pow: nonpositive real base with non-integer exponent");
    }
    return {std::pow(base.real(), exponent), 0.0};
  }
  return std::exp(exponent * std::log(base));
}

}  // namespace fracbinom
