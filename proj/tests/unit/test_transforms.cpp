#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fracbinom/error.hpp"
#include "fracbinom/transforms.hpp"
#include "oracle.hpp"

using namespace fracbinom;

namespace {

constexpr double kPi = std::numbers::pi;

// log(alpha sum_j binom(alpha n, alpha j) lambda^{alpha j}) in 50 digits.
double log_gbt_reference(double alpha, int n, double lambda) {
  using oracle::Big;
  Big s(0);
  const Big a(alpha);
  for (int j = 0; j <= n; ++j) {
    s += a * oracle::gen_binom<Big>(a * n, a * j) *
         boost::multiprecision::pow(Big(lambda), a * j);
  }
  return static_cast<double>(boost::multiprecision::log(s));
}

double log_mgf_reference(double alpha, double x, int n, double xi) {
  using oracle::Big;
  const auto w = oracle::weights<Big>(alpha, x, n);
  Big num(0);
  for (int j = 0; j <= n; ++j) num += w[j] * boost::multiprecision::exp(Big(xi) * j);
  return static_cast<double>(boost::multiprecision::log(num / oracle::sum(w)));
}

}  // namespace

TEST_CASE("roots of unity") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, kPi, 4.0, 6.3}) {
    const auto r = roots_of_unity(alpha);
    CHECK(r.omegas.front() == std::complex<double>(1.0, 0.0));
    // Count of k with -alpha/2 < k <= alpha/2.
    int expected = 0;
    for (int k = -10; k <= 10; ++k) {
      if (-alpha / 2 < k && k <= alpha / 2) ++expected;
    }
    CHECK(static_cast<int>(r.omegas.size()) == expected);
    for (const auto& w : r.omegas) {
      CHECK(std::abs(w) == doctest::Approx(1.0));
      CHECK(std::arg(w) > -kPi);
      CHECK(std::abs(std::exp(alpha * std::log(w)) - 1.0) < 1e-12);
    }
  }
  CHECK(roots_of_unity(0.5).omegas.size() == 1);
  CHECK(roots_of_unity(2.0).omegas.back() == std::complex<double>(-1.0, 0.0));
}

TEST_CASE("theta_alpha") {
  CHECK(theta_alpha(1.0) == doctest::Approx(2 * kPi));
  CHECK(theta_alpha(2.0) == doctest::Approx(2 * kPi));
  CHECK(theta_alpha(0.5) == doctest::Approx(0.5 * kPi));
  CHECK(theta_alpha(1.5) == doctest::Approx(0.5 * kPi));
  CHECK(theta_alpha(2.5) == doctest::Approx(0.5 * kPi));
  CHECK(theta_alpha(0.7) == doctest::Approx(0.7 * kPi));
  CHECK(theta_alpha(3.2) == doctest::Approx(0.8 * kPi));
  CHECK(cf_validity(0.5).contains(0.0));
  CHECK_FALSE(cf_validity(0.5).contains(0.5 * kPi));
}

TEST_CASE("near-integer flag") {
  CHECK(near_integer_conditioning(2.0005));
  CHECK_FALSE(near_integer_conditioning(2.0));
  CHECK_FALSE(near_integer_conditioning(2.5));
  CHECK(log_gbt_rhs(2.0005, 5, 1.0).near_integer_warning);
  CHECK_FALSE(log_gbt_rhs(2.5, 5, 1.0).near_integer_warning);
}

TEST_CASE("generalized binomial theorem against 50-digit sums") {
  for (double alpha : {0.5, 1.5, 2.0, 2.5, 3.0, kPi, 0.23}) {
    for (double lambda : {0.25, 1.0, 3.0}) {
      for (int n : {1, 2, 5, 13, 30}) {
        const double ref = log_gbt_reference(alpha, n, lambda);
        const double got = log_gbt_rhs(alpha, n, lambda).value;
        CHECK(std::fabs(std::expm1(got - ref)) < 1e-9);
      }
    }
  }
  CHECK(gbt_rhs(1.0, 3, 1.0).value == doctest::Approx(8.0));
  CHECK_THROWS_AS(log_gbt_rhs(1.5, 0, 1.0), DomainError);
  CHECK_THROWS_AS(log_gbt_rhs(1.5, 3, -1.0), DomainError);
}

TEST_CASE("large n does not overflow the log form") {
  const double ref = log_gbt_reference(2.5, 400, 3.0);
  CHECK(log_gbt_rhs(2.5, 400, 3.0).value == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("explicit MGF against direct and 50-digit reference") {
  for (double alpha : {0.5, 1.0, 2.5, kPi}) {
    for (double x : {0.2, 0.75}) {
      for (int n : {3, 20}) {
        const Params p{alpha, x, n};
        const DistributionTable t(p);
        for (double xi : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
          const double ref = log_mgf_reference(alpha, x, n, xi);
          CHECK(log_mgf_explicit(p, xi).value == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
          CHECK(log_mgf_direct(t, xi) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
        }
        CHECK(mgf_explicit(p, 0.0).value == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("explicit CF agrees with the direct sum inside the validity interval") {
  for (double alpha : {0.5, 1.5, 2.0, 2.5, 3.7}) {
    const double theta = theta_alpha(alpha);
    for (double x : {0.3, 0.6}) {
      for (int n : {4, 25}) {
        const Params p{alpha, x, n};
        const DistributionTable t(p);
        for (double f : {-0.95, -0.3, 0.0, 0.6, 0.9}) {
          const double xi = f * theta;
          CHECK(std::abs(cf_explicit(p, xi).value - cf_direct(t, xi)) < 1e-8);
        }
      }
    }
  }
  const Params p{0.5, 0.3, 5};
  CHECK_THROWS_AS(cf_explicit(p, 0.5 * kPi), DomainError);
  CHECK(std::abs(cf_direct(DistributionTable(p), 0.0) - 1.0) < 1e-15);
}

TEST_CASE("Z - 1 against wide-precision sums") {
  for (double alpha : {0.5, 1.5, 2.5}) {
    for (double x : {0.3, 0.5}) {
      for (int n : {10, 40, 80}) {
        const auto w = oracle::weights<oracle::Huge>(alpha, x, n);
        const double ref = static_cast<double>(oracle::sum(w) - 1);
        const SignedLog got = z_minus_one(Params{alpha, x, n});
        CHECK(got.value() == doctest::Approx(ref).epsilon(1e-7));
      }
    }
  }
  // Integer alpha: only the roots of unity remain.
  CHECK(z_minus_one(Params{2.0, 0.4, 10}).value() ==
        doctest::Approx(std::pow(0.2, 20)).epsilon(1e-12));
  CHECK(z_minus_one(Params{1.0, 0.4, 10}).sign == 0);
}
