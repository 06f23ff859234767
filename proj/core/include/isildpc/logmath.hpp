#pragma once

#include <algorithm>
#include <cmath>

namespace isildpc {

inline constexpr double kInvLn2 = 1.4426950408889634;

// log(e^a + e^b), safe for very unequal magnitudes
inline double jacobian_log(double a, double b) {
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// log(1 + e^x), overflow safe
inline double softplus(double x) {
  if (x > 36.0) return x;
  if (x < -36.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

// log2(1 + e^-x), overflow safe
inline double softplus2(double x) {
  if (x > 36.0) return std::exp(-x) * kInvLn2;
  if (x < -36.0) return -x * kInvLn2;
  return std::log1p(std::exp(-x)) * kInvLn2;
}

}  // namespace isildpc
