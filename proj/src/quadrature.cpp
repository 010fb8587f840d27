#include "fracbinom/quadrature.hpp"

namespace fracbinom {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_refinements < 1) {
    throw DomainError("max_refinements must be at least 1");
  }
}

double integrate_01(const std::function<double(double)>& integrand, double alpha,
                    const QuadratureConfig& cfg) {
  if (!(alpha > 0.0)) {
    throw DomainError("integrate_01: alpha must be positive");
  }
  const std::array<double, 2> ends{0.0, 1.0};
  if (alpha < 1.0) {
    const double inv = 1.0 / alpha;
    auto substituted = [&](double u) {
      return integrand(std::pow(u, inv)) * std::pow(u, inv - 1.0) * inv;
    };
    return integrate_adaptive<double>(substituted, ends, cfg).value;
  }
  return integrate_adaptive<double>(integrand, ends, cfg).value;
}

}  // namespace fracbinom
