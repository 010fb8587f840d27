#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracbinom/error.hpp"
#include "fracbinom/summation.hpp"

namespace fracbinom {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  // Maximum bisection depth of any subinterval.
  int max_refinements = 30;

  void validate() const;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod abscissae on [-1, 1] (positive half, descending) and the
// embedded 7-point Gauss rule, as tabulated in QUADPACK's qk15.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
  int depth;
};

template <class T, class F>
Segment<T> gauss_kronrod15(F& f, double a, double b, int depth) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const T centre = f(mid);
  T kronrod = centre * kKronrodWeights[7];
  T gauss = centre * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T pair = f(mid - dx) + f(mid + dx);
    kronrod += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss), depth};
}

}  // namespace detail

inline constexpr int kMaxQuadratureSegments = 20000;

// Globally adaptive Gauss-Kronrod (7/15) quadrature over the partition given
// by `breakpoints` (sorted, including both endpoints). The subinterval with
// the largest error estimate is bisected until the summed estimate is below
// max(abs_tol, rel_tol * |integral|).
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                       const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) {
    throw DomainError("integrate_adaptive: need at least two breakpoints");
  }
  using Seg = detail::Segment<T>;
  const auto by_error = [](const Seg& l, const Seg& r) {
    return l.error < r.error;
  };
  std::vector<Seg> heap;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] > breakpoints[i]) {
      heap.push_back(detail::gauss_kronrod15<T>(f, breakpoints[i],
                                                breakpoints[i + 1], 0));
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  while (true) {
    T total{};
    CompensatedSum err_sum;
    for (const Seg& s : heap) {
      total += s.value;
      err_sum.add(s.error);
    }
    const double err = err_sum.value();
    if (!detail::finite(total) || !std::isfinite(err)) {
      throw QuadratureError("integrate_adaptive: non-finite integrand value",
                            err);
    }
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(total))) {
      return {total, err, static_cast<int>(heap.size())};
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= cfg.max_refinements ||
        static_cast<int>(heap.size()) + 2 > kMaxQuadratureSegments ||
        !(mid > worst.a && mid < worst.b)) {
      throw QuadratureError(
          "integrate_adaptive: no convergence after " +
              std::to_string(worst.depth) + " refinements (error estimate " +
              std::to_string(err) + ")",
          err);
    }
    heap.push_back(detail::gauss_kronrod15<T>(f, worst.a, mid, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gauss_kronrod15<T>(f, mid, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

// Integral over (0, 1) of an integrand that may carry a t^(alpha-1)
// singularity at t = 0. For alpha < 1 the substitution u = t^alpha,
// dt = u^(1/alpha - 1) du / alpha, is applied first.
double integrate_01(const std::function<double(double)>& integrand, double alpha,
                    const QuadratureConfig& cfg);

// Integral over (0, 1) of t^(alpha-1) g(t), with the weight handled
// analytically: for alpha < 1 it is (1/alpha) * integral of g(u^(1/alpha)) du.
// `t_breaks` are optional interior breakpoints in the t variable.
template <class T, class G>
QuadratureResult<T> integrate_power_weighted(G&& g, double alpha,
                                             std::span<const double> t_breaks,
                                             const QuadratureConfig& cfg) {
  if (!(alpha > 0.0)) {
    throw DomainError("integrate_power_weighted: alpha must be positive");
  }
  const bool substitute = alpha < 1.0;
  std::vector<double> points{0.0, 1.0};
  for (double t : t_breaks) {
    if (t > 0.0 && t < 1.0) points.push_back(substitute ? std::pow(t, alpha) : t);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  if (substitute) {
    const double inv = 1.0 / alpha;
    auto h = [&](double u) -> T { return g(std::pow(u, inv)) * inv; };
    return integrate_adaptive<T>(h, points, cfg);
  }
  auto h = [&](double t) -> T { return g(t) * std::pow(t, alpha - 1.0); };
  return integrate_adaptive<T>(h, points, cfg);
}

}  // namespace fracbinom
