#include "isildpc/bcjr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isildpc/logmath.hpp"

namespace isildpc {

namespace {

constexpr double kImpossible = -1e300;
inline double jac(double a, double b) { return jacobian_log(a, b); }

}  // namespace

std::vector<double> bcjr_detect(std::span<const double> y, std::span<const double> prior_llr,
                                const Trellis& t, double sigma, double llr_clamp) {
  const std::size_t n = y.size();
  if (prior_llr.size() != n) throw std::invalid_argument("bcjr: |y| != |prior|");
  if (n == 0) return {};
  const int S = t.n_states;
  const double sigma_eff = std::max(sigma, 1e-6);  // sigma = 0 saturates, never divides by zero
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma_eff * sigma_eff);

  // log P(u=0), log P(u=1) from the prior LLR
  std::vector<double> lp0(n), lp1(n);
  for (std::size_t k = 0; k < n; ++k) {
    lp0[k] = -softplus(-prior_llr[k]);
    lp1[k] = -softplus(prior_llr[k]);
  }

  std::vector<double> alpha(static_cast<std::size_t>(n + 1) * S, kImpossible);
  alpha[0] = 0.0;  // known all-+1 start
  std::vector<double> gamma(static_cast<std::size_t>(n) * S * 2);
  for (std::size_t k = 0; k < n; ++k) {
    double* g = &gamma[k * S * 2];
    const double* a = &alpha[k * S];
    double* a_next = &alpha[(k + 1) * S];
    for (int s = 0; s < S; ++s) {
      if (a[s] == kImpossible) {
        g[s * 2] = g[s * 2 + 1] = kImpossible;
        continue;
      }
      for (int u = 0; u < 2; ++u) {
        const auto& e = t.edge(s, u);
        double d = y[k] - e.output;
        double m = (u == 0 ? lp0[k] : lp1[k]) - d * d * inv_two_sigma2;
        g[s * 2 + u] = m;
        double cand = a[s] + m;
        a_next[e.next_state] =
            a_next[e.next_state] == kImpossible ? cand : jac(a_next[e.next_state], cand);
      }
    }
    // normalize to keep magnitudes bounded
    double mx = *std::max_element(a_next, a_next + S);
    for (int s = 0; s < S; ++s)
      if (a_next[s] != kImpossible) a_next[s] -= mx;
  }

  std::vector<double> beta(static_cast<std::size_t>(S), 0.0);  // free terminal state
  std::vector<double> beta_prev(static_cast<std::size_t>(S));
  std::vector<double> out(n);
  for (std::size_t kk = n; kk-- > 0;) {
    const double* a = &alpha[kk * S];
    const double* g = &gamma[kk * S * 2];
    double num = kImpossible, den = kImpossible;
    std::fill(beta_prev.begin(), beta_prev.end(), kImpossible);
    for (int s = 0; s < S; ++s) {
      for (int u = 0; u < 2; ++u) {
        if (g[s * 2 + u] == kImpossible) continue;
        const auto& e = t.edge(s, u);
        double path = g[s * 2 + u] + beta[e.next_state];
        beta_prev[s] = beta_prev[s] == kImpossible ? path : jac(beta_prev[s], path);
        if (a[s] == kImpossible) continue;
        double full = a[s] + path;
        if (u == 0)
          num = num == kImpossible ? full : jac(num, full);
        else
          den = den == kImpossible ? full : jac(den, full);
      }
    }
    double ext = (num - den) - prior_llr[kk];
    out[kk] = std::clamp(ext, -llr_clamp, llr_clamp);
    double mx = *std::max_element(beta_prev.begin(), beta_prev.end());
    for (int s = 0; s < S; ++s)
      if (beta_prev[s] != kImpossible) beta_prev[s] -= mx;
    std::swap(beta, beta_prev);
  }
  return out;
}

std::vector<double> bcjr_detect(std::span<const double> y, std::span<const double> prior_llr,
                                const ChannelPoly& h, const NoiseModel& noise,
                                double llr_clamp) {
  Trellis t = make_trellis(h);
  return bcjr_detect(y, prior_llr, t, noise.sigma, llr_clamp);
}

}  // namespace isildpc
