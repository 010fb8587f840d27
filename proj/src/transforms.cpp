#include "fracbinom/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracbinom/error.hpp"
#include "fracbinom/specfun.hpp"
#include "fracbinom/summation.hpp"

namespace fracbinom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTinyTol = 1e-300;

double snapped_alpha(double alpha) {
  return is_near_integer(alpha) ? std::round(alpha) : alpha;
}

void check_alpha(double alpha, const char* op) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(op) + ": alpha must be positive and finite");
  }
}

// Dyadic breakpoints 2^-k towards t = 0, where (1-t)^a concentrates its
// mass for large a.
std::vector<double> concentration_breaks(double a) {
  const int levels =
      std::clamp(static_cast<int>(std::ceil(std::log2(std::max(a, 1.0)))) + 2,
                 1, 40);
  std::vector<double> breaks;
  for (int k = 1; k <= levels; ++k) breaks.push_back(std::ldexp(1.0, -k));
  return breaks;
}

// Absolute tolerance for an integral that enters a sum multiplied by
// e^{log_factor}, so that its contribution is accurate to cfg.abs_tol.
QuadratureConfig scaled_config(const QuadratureConfig& cfg, double log_factor) {
  QuadratureConfig out = cfg;
  const double scaled = std::log(cfg.abs_tol) - log_factor;
  out.abs_tol = scaled > 700.0 ? std::exp(700.0)
                               : std::max(kTinyTol, std::exp(scaled));
  return out;
}

// integral_0^1 t^{alpha-1} (1-t)^a / |(c t)^alpha - d e^{i phi}|^2 dt, where
// only one_minus_cos = 1 - cos(phi) matters. The denominator is written as
// ((ct)^alpha - d)^2 + 2 (ct)^alpha d (1 - cos phi) to avoid cancellation.
double modulus_integral(double alpha, double a, double log_c, double log_d,
                        double one_minus_cos, const QuadratureConfig& cfg) {
  std::vector<double> breaks = concentration_breaks(a);
  const double peak = std::exp(log_d / alpha - log_c);
  if (peak > 0.0 && peak < 1.0) breaks.push_back(peak);
  const double d = std::exp(log_d);
  auto g = [&](double t) {
    const double p = std::exp(alpha * (log_c + std::log(t)));
    const double diff = p - d;
    const double denom = diff * diff + 2.0 * p * d * one_minus_cos;
    return std::exp(a * std::log1p(-t)) / denom;
  };
  return integrate_power_weighted<double>(g, alpha, breaks, cfg).value;
}

// 1 - cos(alpha pi), computed as 2 sin^2(alpha pi / 2).
double one_minus_cos_alpha_pi(double alpha) {
  const double s = std::sin(0.5 * kPi * alpha);
  return 2.0 * s * s;
}

void check_real_sum(std::complex<double> sum, const char* op) {
  if (std::fabs(sum.imag()) > 1e-10 * std::fabs(sum.real()) + 1e-12) {
    throw NumericalError(std::string(op) +
                         ": roots-of-unity sum has a residual imaginary part " +
                         std::to_string(sum.imag()));
  }
}

}  // namespace

RootsOfUnity roots_of_unity(double alpha) {
  check_alpha(alpha, "roots_of_unity");
  RootsOfUnity out;
  out.alpha = alpha;
  out.omegas.emplace_back(1.0, 0.0);
  // theta = 2 pi k / alpha with -alpha/2 < k <= alpha/2.
  const double half = 0.5 * alpha;
  long k_min = 0;
  long k_max = 0;
  if (is_near_integer(half)) {
    k_max = std::lround(half);
    k_min = -k_max + 1;
  } else {
    k_max = static_cast<long>(std::floor(half));
    k_min = -k_max;
  }
  for (long k = k_min; k <= k_max; ++k) {
    if (k == 0) continue;
    if (is_near_integer(half) && k == k_max) {
      out.omegas.emplace_back(-1.0, 0.0);
      continue;
    }
    out.omegas.push_back(std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / alpha));
  }
  return out;
}

double theta_alpha(double alpha) {
  check_alpha(alpha, "theta_alpha");
  if (is_near_integer(alpha)) return 2.0 * kPi;
  const double lower = 2.0 * std::floor(0.5 * alpha);
  const double upper = 2.0 * std::ceil(0.5 * alpha);
  return std::min(alpha - lower, upper - alpha) * kPi;
}

CfValidity cf_validity(double alpha) { return {theta_alpha(alpha)}; }

bool near_integer_conditioning(double alpha) {
  const double gap = std::fabs(alpha - std::round(alpha));
  return gap >= kIntegerTolerance && gap < 1e-3;
}

ExplicitValue<double> log_gbt_rhs(double alpha, int n, double lambda,
                                  const QuadratureConfig& cfg) {
  check_alpha(alpha, "gbt_rhs");
  if (n < 1) throw DomainError("gbt_rhs: n must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("gbt_rhs: lambda must be positive and finite");
  }
  cfg.validate();
  const double a_eff = snapped_alpha(alpha);
  const double a = a_eff * n;
  const double log_scale = a * std::log1p(lambda);

  // Roots-of-unity sum relative to the omega = 1 term.
  std::complex<double> sum{1.0, 0.0};
  const RootsOfUnity roots = roots_of_unity(a_eff);
  for (std::size_t i = 1; i < roots.omegas.size(); ++i) {
    sum += principal_pow((1.0 + lambda * roots.omegas[i]) / (1.0 + lambda), a);
  }
  check_real_sum(sum, "gbt_rhs");
  double total = sum.real();

  if (!is_near_integer(a_eff)) {
    const double log_lambda = std::log(lambda);
    const double coeff =
        a_eff * std::exp(a_eff * log_lambda) * std::sin(a_eff * kPi) / kPi;
    const double omc = one_minus_cos_alpha_pi(a_eff);
    const double log_coeff = std::log(std::fabs(coeff));
    // First part: 1 / (1+lambda)^a; second: (lambda / (1+lambda))^a.
    const double log_f1 = -log_scale;
    const double log_f2 = a * log_lambda - log_scale;
    CompensatedSum correction;
    if (log_coeff + log_f1 > -745.0) {
      const double i1 = modulus_integral(a_eff, a, 0.0, a_eff * log_lambda, omc,
                                         scaled_config(cfg, log_coeff + log_f1));
      correction.add(std::exp(log_f1) * i1);
    }
    if (log_coeff + log_f2 > -745.0) {
      const double i2 = modulus_integral(a_eff, a, log_lambda, 0.0, omc,
                                         scaled_config(cfg, log_coeff + log_f2));
      correction.add(std::exp(log_f2) * i2);
    }
    total -= coeff * correction.value();
  }
  if (!(total > 0.0)) {
    throw NumericalError("gbt_rhs: non-positive scaled total " +
                         std::to_string(total));
  }
  return {log_scale + std::log(total), near_integer_conditioning(alpha)};
}

ExplicitValue<double> gbt_rhs(double alpha, int n, double lambda,
                              const QuadratureConfig& cfg) {
  const ExplicitValue<double> lv = log_gbt_rhs(alpha, n, lambda, cfg);
  return {std::exp(lv.value), lv.near_integer_warning};
}

double log_mgf_direct(const DistributionTable& table, double xi) {
  const int n = table.n();
  std::vector<double> terms(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) terms[j] = xi * j + table.log_pmf(j);
  return log_sum_exp(terms);
}

double mgf_direct(const DistributionTable& table, double xi) {
  return std::exp(log_mgf_direct(table, xi));
}

ExplicitValue<double> log_mgf_explicit(const Params& params, double xi,
                                       const QuadratureConfig& cfg) {
  params.validate_interior();
  cfg.validate();
  if (!std::isfinite(xi)) throw DomainError("mgf_explicit: xi must be finite");
  const double alpha = snapped_alpha(params.alpha);
  const double x = params.x;
  const int n = params.n;
  const double a = alpha * n;
  const double log_x = std::log(x);
  const double log_1mx = std::log1p(-x);
  const double log_base = log_add(log_1mx, log_x + xi / alpha);
  const double log_scale = a * log_base;

  const double r1 = std::exp(log_1mx - log_base);
  const double r2 = std::exp(log_x + xi / alpha - log_base);
  std::complex<double> sum{1.0, 0.0};
  const RootsOfUnity roots = roots_of_unity(alpha);
  for (std::size_t i = 1; i < roots.omegas.size(); ++i) {
    sum += principal_pow(r1 + r2 * roots.omegas[i], a);
  }
  check_real_sum(sum, "mgf_explicit");
  double total = sum.real();

  if (!is_near_integer(alpha)) {
    const double coeff = alpha * std::exp(xi) * std::sin(alpha * kPi) / kPi;
    const double log_coeff = std::log(std::fabs(coeff));
    const double omc = one_minus_cos_alpha_pi(alpha);
    const double log_common = alpha * (log_x + log_1mx);
    const double log_f1 = log_common + a * (log_1mx - log_base);
    const double log_f2 = log_common + a * (log_x + xi / alpha - log_base);
    CompensatedSum correction;
    if (log_coeff + log_f1 > -745.0) {
      const double i1 =
          modulus_integral(alpha, a, log_1mx, alpha * log_x + xi, omc,
                           scaled_config(cfg, log_coeff + log_f1));
      correction.add(std::exp(log_f1) * i1);
    }
    if (log_coeff + log_f2 > -745.0) {
      const double i2 =
          modulus_integral(alpha, a, log_x + xi / alpha, alpha * log_1mx, omc,
                           scaled_config(cfg, log_coeff + log_f2));
      correction.add(std::exp(log_f2) * i2);
    }
    total -= coeff * correction.value();
  }
  if (!(total > 0.0)) {
    throw NumericalError("mgf_explicit: non-positive scaled total " +
                         std::to_string(total));
  }
  return {log_scale + std::log(total) - log_normalizing_constant(params),
          near_integer_conditioning(params.alpha)};
}

ExplicitValue<double> mgf_explicit(const Params& params, double xi,
                                   const QuadratureConfig& cfg) {
  const ExplicitValue<double> lv = log_mgf_explicit(params, xi, cfg);
  return {std::exp(lv.value), lv.near_integer_warning};
}

std::complex<double> cf_direct(const DistributionTable& table, double xi) {
  CompensatedSum re;
  CompensatedSum im;
  for (int j = 0; j <= table.n(); ++j) {
    const std::complex<double> term = std::polar(table.pmf(j), xi * j);
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

ExplicitValue<std::complex<double>> cf_explicit(const Params& params, double xi,
                                                const QuadratureConfig& cfg) {
  params.validate_interior();
  cfg.validate();
  const double theta = theta_alpha(params.alpha);
  if (!(std::fabs(xi) < theta)) {
    throw DomainError("cf_explicit: |xi| = " + std::to_string(std::fabs(xi)) +
                      " outside the validity interval (theta_alpha = " +
                      std::to_string(theta) + ")");
  }
  const double alpha = snapped_alpha(params.alpha);
  const double x = params.x;
  const int n = params.n;
  const double a = alpha * n;
  const std::complex<double> rot = std::polar(1.0, xi / alpha);

  std::complex<double> total{0.0, 0.0};
  for (const auto& omega : roots_of_unity(alpha).omegas) {
    total += principal_pow((1.0 - x) + x * omega * rot, a);
  }

  if (!is_near_integer(alpha)) {
    const double coeff = alpha * std::sin(alpha * kPi) / kPi;
    const double log_x = std::log(x);
    const double log_1mx = std::log1p(-x);
    const double x_a = std::exp(alpha * log_x);
    const double y_a = std::exp(alpha * log_1mx);
    const double log_n1 = alpha * log_x + alpha * (n + 1) * log_1mx;
    const double log_n2 = alpha * (n + 1) * log_x + alpha * log_1mx;
    const std::complex<double> e1 = std::polar(1.0, xi);
    const std::complex<double> e2 = std::polar(1.0, xi * (n - 1));
    const std::complex<double> u1 = x_a * std::polar(1.0, xi - alpha * kPi);
    const std::complex<double> u2 = x_a * std::polar(1.0, xi + alpha * kPi);
    const std::complex<double> v3 = y_a * std::polar(1.0, -(xi + alpha * kPi));
    const std::complex<double> v4 = y_a * std::polar(1.0, -(xi - alpha * kPi));

    auto g = [&](double t) -> std::complex<double> {
      const double log_t = std::log(t);
      const double decay = a * std::log1p(-t);
      const double p = std::exp(alpha * (log_1mx + log_t));
      const double q = std::exp(alpha * (log_x + log_t));
      const std::complex<double> first =
          std::exp(decay + log_n1) * e1 / ((p - u1) * (p - u2));
      const std::complex<double> second =
          std::exp(decay + log_n2) * e2 / ((v3 - q) * (v4 - q));
      return first + second;
    };
    std::vector<double> breaks = concentration_breaks(a);
    breaks.push_back(x / (1.0 - x));
    breaks.push_back((1.0 - x) / x);
    const QuadratureConfig local = scaled_config(cfg, std::log(std::fabs(coeff)));
    const auto integral =
        integrate_power_weighted<std::complex<double>>(g, alpha, breaks, local);
    total -= coeff * integral.value;
  }
  const double z = std::exp(log_normalizing_constant(params));
  return {total / z, near_integer_conditioning(params.alpha)};
}

double SignedLog::value() const {
  return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

SignedLog z_minus_one(const Params& params, const QuadratureConfig& cfg) {
  params.validate_interior();
  cfg.validate();
  const double alpha = snapped_alpha(params.alpha);
  const double x = params.x;
  const double a = alpha * params.n;
  const double log_x = std::log(x);
  const double log_1mx = std::log1p(-x);

  // Terms as (log |value|, sign of value) pairs.
  std::vector<std::pair<double, double>> terms;
  const RootsOfUnity roots = roots_of_unity(alpha);
  std::complex<double> phase_sum_check{0.0, 0.0};
  for (std::size_t i = 1; i < roots.omegas.size(); ++i) {
    const std::complex<double> base = (1.0 - x) + x * roots.omegas[i];
    const double log_mod = a * std::log(std::abs(base));
    const double c = std::cos(a * std::arg(base));
    terms.emplace_back(log_mod, c);
    phase_sum_check += std::polar(1.0, a * std::arg(base));
  }

  if (!is_near_integer(alpha)) {
    QuadratureConfig rel = cfg;
    rel.abs_tol = kTinyTol;
    const double omc = one_minus_cos_alpha_pi(alpha);
    const double s = std::sin(alpha * kPi);
    const double log_coeff =
        std::log(alpha * std::fabs(s) / kPi) + alpha * (log_x + log_1mx);
    const double i1 = modulus_integral(alpha, a, log_1mx, alpha * log_x, omc, rel);
    const double i2 = modulus_integral(alpha, a, log_x, alpha * log_1mx, omc, rel);
    const double sign = s > 0.0 ? -1.0 : 1.0;
    terms.emplace_back(log_coeff + a * log_1mx + std::log(i1), sign);
    terms.emplace_back(log_coeff + a * log_x + std::log(i2), sign);
  }

  double peak = kNegInf;
  for (const auto& [log_mod, weight] : terms) {
    if (weight != 0.0) peak = std::max(peak, log_mod);
  }
  if (peak == kNegInf) return {kNegInf, 0};
  CompensatedSum acc;
  for (const auto& [log_mod, weight] : terms) {
    acc.add(weight * std::exp(log_mod - peak));
  }
  const double scaled = acc.value();
  if (scaled == 0.0) return {kNegInf, 0};
  return {peak + std::log(std::fabs(scaled)), scaled > 0.0 ? 1 : -1};
}

}  // namespace fracbinom
