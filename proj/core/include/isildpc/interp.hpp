#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isildpc {

// Monotone cubic Hermite interpolation (Fritsch-Butland slopes). Knots must
// be strictly increasing in x; monotone data stays monotone under evaluation.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("interp: need >= 2 knots");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("interp: x not strictly increasing");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.resize(n);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0)
        m_[i] = 0.0;
      else
        m_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
    }
  }

  double operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double t = (x - x_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y_[lo] * (2 * t3 - 3 * t2 + 1) + h * m_[lo] * (t3 - 2 * t2 + t) +
           y_[lo + 1] * (-2 * t3 + 3 * t2) + h * m_[lo + 1] * (t3 - t2);
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace isildpc
