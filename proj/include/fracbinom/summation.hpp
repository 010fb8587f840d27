#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace fracbinom {

// Neumaier's improved Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(e^a + e^b), exact for -inf operands.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(sum_i e^{xs[i]}); -inf for an empty range or all -inf entries.
inline double log_sum_exp(std::span<const double> xs) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (xs.empty()) return kNegInf;
  const double peak = *std::max_element(xs.begin(), xs.end());
  if (peak == kNegInf) return kNegInf;
  CompensatedSum acc;
  for (double v : xs) acc.add(std::exp(v - peak));
  return peak + std::log(acc.value());
}

}  // namespace fracbinom
