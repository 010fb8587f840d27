#include <doctest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "fracbinom/asymptotics.hpp"
#include "fracbinom/error.hpp"
#include "fracbinom/transforms.hpp"
#include "oracle.hpp"

using namespace fracbinom;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section maximization of xi z - alpha log(1 - x + x e^{xi/alpha}).
double golden_sup(double alpha, double x, double z) {
  auto f = [&](double xi) {
    return xi * z - alpha * std::log((1.0 - x) + x * std::exp(xi / alpha));
  };
  double lo = -60.0 * alpha;
  double hi = 60.0 * alpha;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  for (int i = 0; i < 300; ++i) {
    if (f(c) > f(d)) {
      hi = d;
    } else {
      lo = c;
    }
    c = hi - g * (hi - lo);
    d = lo + g * (hi - lo);
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("rate_ldp closed form") {
  CHECK(rate_ldp({2.0, 0.3, 0.3}) == doctest::Approx(0.0));
  CHECK(rate_ldp({1.0, 0.5, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(rate_ldp({1.0, 0.5, 1.5}) == kInf);
  CHECK(rate_ldp({1.0, 0.5, -0.1}) == kInf);
  CHECK(rate_ldp({1.0, 0.5, 0.7}) == doctest::Approx(0.7 * std::log(1.4) + 0.3 * std::log(0.6)));
  CHECK(rate_ldp({1.0, 0.5, 0.7}) == doctest::Approx(0.082282).epsilon(1e-5));
  CHECK_THROWS_AS(rate_ldp({0.0, 0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(rate_ldp({1.0, 1.0, 0.5}), DomainError);
}

TEST_CASE("rate functions scale with alpha and are convex") {
  for (double z = 0.0; z <= 1.0; z += 0.05) {
    CHECK(rate_ldp({2.5, 0.3, z}) == doctest::Approx(2.5 * rate_ldp({1.0, 0.3, z})).epsilon(1e-14));
    CHECK(rate_mdp({2.5, 0.3, z}) == doctest::Approx(2.5 * rate_mdp({1.0, 0.3, z})).epsilon(1e-14));
  }
  const double h = 0.01;
  for (double z = 0.02; z <= 0.98; z += 0.01) {
    const double second = rate_ldp({0.5, 0.4, z - h}) - 2 * rate_ldp({0.5, 0.4, z}) +
                          rate_ldp({0.5, 0.4, z + h});
    CHECK(second >= -1e-12);
    if (std::fabs(z - 0.4) > 1e-9) CHECK(rate_ldp({0.5, 0.4, z}) > 0.0);
  }
}

TEST_CASE("rate_mdp") {
  CHECK(rate_mdp({1.0, 0.5, 0.0}) == 0.0);
  CHECK(rate_mdp({1.0, 0.5, 1.0}) == doctest::Approx(2.0));
  CHECK(rate_mdp({1.3, 0.2, 1.4}) == doctest::Approx(4.0 * rate_mdp({1.3, 0.2, 0.7})));
}

TEST_CASE("lambda_limit") {
  CHECK(lambda_limit(2.5, 0.3, 0.0) == doctest::Approx(0.0).epsilon(1e-16));
  for (double xi : {-3.0, 0.2, 4.0}) {
    CHECK(lambda_limit(1.0, 0.3, xi) == doctest::Approx(std::log(0.7 + 0.3 * std::exp(xi))));
  }
  for (double alpha : {0.5, 2.0}) {
    const double h = 1e-6;
    const double d = (lambda_limit(alpha, 0.3, h) - lambda_limit(alpha, 0.3, -h)) / (2 * h);
    CHECK(d == doctest::Approx(0.3).epsilon(1e-8));
    for (double xi = -20.0; xi <= 20.0; xi += 0.5) {
      const double s = lambda_limit(alpha, 0.3, xi - 0.1) - 2 * lambda_limit(alpha, 0.3, xi) +
                       lambda_limit(alpha, 0.3, xi + 0.1);
      CHECK(s >= -1e-9);
    }
  }
  CHECK(std::isfinite(lambda_limit(0.5, 0.3, 800.0)));
}

TEST_CASE("fenchel_legendre equals rate_ldp and a golden-section sup") {
  for (double alpha : {0.5, 1.0, 2.0, 2.5}) {
    for (int i = 1; i <= 99; ++i) {
      const double z = i / 100.0;
      const double closed = rate_ldp({alpha, 0.3, z});
      CHECK(std::fabs(fenchel_legendre(alpha, 0.3, z) - closed) < 1e-9);
      CHECK(std::fabs(golden_sup(alpha, 0.3, z) - closed) < 1e-8);
    }
  }
  CHECK(std::fabs(fenchel_legendre(2.0, 0.3, 0.6) - rate_ldp({2.0, 0.3, 0.6})) < 1e-9);
  CHECK(fenchel_legendre(2.0, 0.3, 0.3) == doctest::Approx(0.0).scale(1.0));
  CHECK(fenchel_legendre(2.0, 0.3, 1.2) == kInf);
  CHECK(fenchel_legendre(2.0, 0.3, 0.0) == doctest::Approx(rate_ldp({2.0, 0.3, 0.0})));
  CHECK(fenchel_legendre(2.0, 0.3, 1.0) == doctest::Approx(rate_ldp({2.0, 0.3, 1.0})));
}

// (1/n) log E[e^{n xi (S/n)}] = (1/n) log E[e^{xi S}].
TEST_CASE("scaled log-MGF approaches lambda_limit") {
  for (double alpha : {0.5, 2.5}) {
    for (double xi : {-1.0, 0.5, 1.0}) {
      double prev = kInf;
      // The error decays geometrically until it meets rounding (~1e-16).
      for (int n : {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}) {
        const DistributionTable t(Params{alpha, 0.3, n});
        const double err = std::fabs(log_mgf_direct(t, xi) / n - lambda_limit(alpha, 0.3, xi));
        CHECK((err < prev || err < 1e-13));
        prev = err;
      }
      CHECK(prev < 1e-13);
    }
  }
}

TEST_CASE("moderate scaled log-MGF approaches the quadratic limit") {
  const double alpha = 2.0;
  const double x = 0.3;
  const double beta = 0.7;
  for (double xi : {-1.0, 1.0}) {
    double prev = kInf;
    for (int n : {100, 200, 400, 800, 1600, 3200}) {
      const DistributionTable t(Params{alpha, x, n});
      const double c = std::pow(n, beta);
      const double s = c * xi / n;
      const double v = (n / (c * c)) * (log_mgf_direct(t, s) - s * n * x);
      const double err = std::fabs(v - x * (1 - x) * xi * xi / (2 * alpha));
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("ldp_empirical") {
  const std::vector<int> grid{100, 200, 400, 800, 1600};
  const auto r = ldp_empirical(1.0, 0.5, 0.7, grid);
  REQUIRE(r.rows.size() == 5);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].n == grid[i]);
    CHECK(r.rows[i].theoretical == doctest::Approx(0.082282).epsilon(1e-5));
    if (i > 0) CHECK(r.rows[i].abs_error < r.rows[i - 1].abs_error);
  }
  // Exact tail from an independent binomial cdf.
  const boost::math::binomial_distribution<double> bin(100, 0.5);
  const double tail = boost::math::cdf(boost::math::complement(bin, 69));
  CHECK(r.rows[0].empirical == doctest::Approx(-std::log(tail) / 100).epsilon(1e-10));

  const auto near = ldp_empirical(1.0, 0.5, 0.51, grid);
  for (std::size_t i = 0; i < near.rows.size(); ++i) {
    CHECK(near.rows[i].theoretical > 0.0);
    CHECK(near.rows[i].empirical > near.rows[i].theoretical);
    if (i > 0) CHECK(near.rows[i].empirical < near.rows[i - 1].empirical);
  }

  const auto lower = ldp_empirical(2.0, 0.5, 0.3, grid, TailMode::lower);
  CHECK(lower.rows.back().abs_error < lower.rows.front().abs_error);
  CHECK_THROWS_AS(ldp_empirical(1.0, 0.5, 0.4, grid), DomainError);
  CHECK_THROWS_AS(ldp_empirical(1.0, 0.5, 0.7, {200, 100}), DomainError);
  CHECK_THROWS_AS(ldp_empirical(1.0, 0.5, 0.6, grid, TailMode::lower), DomainError);
}

TEST_CASE("ldp_empirical does not depend on the thread count") {
  const std::vector<int> grid{100, 150, 200, 300, 400, 600};
  const auto a = ldp_empirical(2.0, 0.3, 0.6, grid, TailMode::upper, 1);
  const auto b = ldp_empirical(2.0, 0.3, 0.6, grid, TailMode::upper, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.rows[i].empirical == b.rows[i].empirical);
  }
}

TEST_CASE("mdp_empirical") {
  const ModerateScale scale{0.7, {400, 800, 1600, 3200, 6400}};
  const auto r = mdp_empirical(1.0, 0.5, 1.0, scale, 0);
  for (const auto& row : r.rows) {
    CHECK(row.theoretical == doctest::Approx(2.0));
    CHECK(std::isfinite(row.empirical));
    CHECK(row.empirical > 0.0);
  }
  CHECK(r.rows.back().abs_error < r.rows.front().abs_error);
  const auto lower = mdp_empirical(1.0, 0.5, -1.0, scale, 0);
  CHECK(lower.rows.front().empirical == doctest::Approx(r.rows.front().empirical).epsilon(1e-12));
  CHECK_THROWS_AS(mdp_empirical(1.0, 0.5, 1.0, ModerateScale{0.5, {400}}), DomainError);
  CHECK_THROWS_AS(mdp_empirical(1.0, 0.5, 1.0, ModerateScale{1.0, {400}}), DomainError);
  CHECK_THROWS_AS(mdp_empirical(1.0, 0.5, 0.0, scale), DomainError);
}

TEST_CASE("berry_esseen_sup against a brute-force scan") {
  // Bin(4, 1/2): evaluate |F - Phi| just left and right of every jump.
  const boost::math::binomial_distribution<double> bin(4, 0.5);
  const boost::math::normal_distribution<double> norm;
  double ref = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const double z = (j - 2.0) / 1.0;
    const double phi = boost::math::cdf(norm, z);
    const double right = boost::math::cdf(bin, j);
    const double left = j > 0 ? boost::math::cdf(bin, j - 1) : 0.0;
    ref = std::max({ref, std::fabs(right - phi), std::fabs(left - phi)});
  }
  const DistributionTable t(Params{1.0, 0.5, 4});
  CHECK(berry_esseen_sup(t) == doctest::Approx(ref).epsilon(1e-13));

  // A dense evaluation never exceeds the jump scan.
  const DistributionTable u(Params{2.5, 0.7, 30});
  const double sup = berry_esseen_sup(u);
  CHECK(sup <= 1.0);
  const double sd = std::sqrt(u.variance());
  for (double z = -6.0; z <= 6.0; z += 1e-3) {
    const double s = u.mean() + z * sd;
    const int j = static_cast<int>(std::floor(s));
    const double f = j < 0 ? 0.0 : (j >= 30 ? 1.0 : u.cdf()[j]);
    CHECK(std::fabs(f - boost::math::cdf(norm, z)) <= sup + 1e-15);
  }
  CHECK_THROWS_AS(berry_esseen_sup(DistributionTable(Params{1.0, 0.0, 4})), DomainError);
}

TEST_CASE("sup_distance_mu_nu") {
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(sup_distance_mu_nu(Params{1.0, x, 37}) <= 1e-12);
  }
  CHECK(sup_distance_mu_nu(Params{2.0, 0.5, 1}) == doctest::Approx(0.25).epsilon(1e-14));

  // Brute force: both cdfs evaluated at every jump and just to its left.
  const Params p{2.5, 0.6, 10};
  const DistributionTable mu(p);
  const LatticeTable nu(p);
  auto f_mu = [&](double s) {
    double acc = 0.0;
    for (int j = 0; j <= p.n && j <= s; ++j) acc += mu.pmf(j);
    return acc;
  };
  auto g_nu = [&](double s) {
    double acc = 0.0;
    for (int k = 0; k <= nu.trials() && nu.support()[k] <= s; ++k) acc += nu.pmf(k);
    return acc;
  };
  std::vector<double> points;
  for (int j = 0; j <= p.n; ++j) points.push_back(j);
  for (double s : nu.support()) points.push_back(s);
  double ref = 0.0;
  for (double s : points) {
    ref = std::max(ref, std::fabs(f_mu(s) - g_nu(s)));
    ref = std::max(ref, std::fabs(f_mu(s - 1e-9) - g_nu(s - 1e-9)));
  }
  CHECK(sup_distance_mu_nu(p) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("moment_diff against 50-digit moments") {
  using oracle::Big;
  const double alpha = 0.7;
  const double x = 0.3;
  const int n = 20;
  const auto w = oracle::weights<Big>(alpha, x, n);
  const Big z = oracle::sum(w);
  const int trials = 14;
  for (int m = 1; m <= 4; ++m) {
    Big mu(0);
    for (int j = 0; j <= n; ++j) mu += w[j] / z * boost::multiprecision::pow(Big(j), m);
    Big nu(0);
    for (int k = 0; k <= trials; ++k) {
      nu += oracle::gen_binom<Big>(Big(trials), Big(k)) *
            boost::multiprecision::pow(Big(x), k) *
            boost::multiprecision::pow(Big(1) - Big(x), trials - k) *
            boost::multiprecision::pow(Big(k) / Big(alpha), m);
    }
    const double ref = static_cast<double>(mu - nu);
    CHECK(moment_diff(Params{alpha, x, n}, m) ==
          doctest::Approx(ref).epsilon(1e-9).scale(1e-9 * std::pow(n, m)));
  }
  for (int m = 1; m <= 4; ++m) {
    CHECK(std::fabs(moment_diff(Params{1.0, 0.4, 200}, m)) <= 1e-9 * std::pow(200.0, m));
  }
  CHECK_THROWS_AS(moment_diff(Params{0.5, 0.3, 10000}, 200), NumericalError);
  CHECK_THROWS_AS(moment_diff(Params{0.5, 0.3, 10}, 0), DomainError);
}
