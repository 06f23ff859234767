#include "isildpc/sir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "isildpc/logmath.hpp"

namespace isildpc {

namespace {

inline double jac(double a, double b) { return jacobian_log(a, b); }

constexpr double kLog2e = 1.4426950408889634;
constexpr double kTwoPi = 6.283185307179586;

}  // namespace

SirEstimate estimate_sir(const ChannelPoly& h, const NoiseModel& noise, long long n,
                         Rng& rng, const SirOptions& opt) {
  if (n < 10000) throw std::invalid_argument("estimate_sir: need n >= 10^4 samples");
  if (noise.sigma <= 0.0) throw std::invalid_argument("estimate_sir: sigma must be positive");
  if (opt.segments < 10) throw std::invalid_argument("estimate_sir: need >= 10 segments");

  const Trellis t = make_trellis(h);
  const int S = t.n_states;
  const double sigma2 = noise.sigma * noise.sigma;
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);
  const double log_norm = -0.5 * std::log(kTwoPi * sigma2);
  const double log_half = -0.6931471805599453;

  // simulate and run the forward recursion in one pass
  std::vector<double> alpha(S, -1e300), next(S);
  alpha[0] = 0.0;  // all-+1 preload
  int state = 0;
  const long long kept = n - opt.burn_in;
  if (kept < opt.segments) throw std::invalid_argument("estimate_sir: n too small for burn-in");
  std::vector<double> bits_k(static_cast<std::size_t>(kept));
  for (long long k = 0; k < n; ++k) {
    int bit = rng.bit() ? 1 : 0;
    const auto& e_true = t.edge(state, bit);
    double y = e_true.output + noise.sigma * rng.gaussian();
    state = e_true.next_state;

    std::fill(next.begin(), next.end(), -1e300);
    for (int s = 0; s < S; ++s) {
      if (alpha[s] == -1e300) continue;
      for (int u = 0; u < 2; ++u) {
        const auto& e = t.edge(s, u);
        double d = y - e.output;
        double cand = alpha[s] + log_half + log_norm - d * d * inv_two_sigma2;
        next[e.next_state] = next[e.next_state] == -1e300 ? cand : jac(next[e.next_state], cand);
      }
    }
    double c = -1e300;
    for (double v : next) c = v == -1e300 ? c : (c == -1e300 ? v : jac(c, v));
    for (int s = 0; s < S; ++s)
      if (next[s] != -1e300) next[s] -= c;
    std::swap(alpha, next);
    if (k >= opt.burn_in) bits_k[static_cast<std::size_t>(k - opt.burn_in)] = -c * kLog2e;
  }

  const double h_y_given_x = 0.5 * std::log2(kTwoPi * std::exp(1.0) * sigma2);

  // jackknife over contiguous segments
  const long long seg_len = kept / opt.segments;
  const long long used = seg_len * opt.segments;
  double total = 0.0;
  std::vector<double> seg_sum(static_cast<std::size_t>(opt.segments), 0.0);
  for (long long i = 0; i < used; ++i) {
    seg_sum[static_cast<std::size_t>(i / seg_len)] += bits_k[static_cast<std::size_t>(i)];
    total += bits_k[static_cast<std::size_t>(i)];
  }
  const double mean = total / static_cast<double>(used);
  double ss = 0.0;
  for (int s = 0; s < opt.segments; ++s) {
    double leave_out = (total - seg_sum[static_cast<std::size_t>(s)]) /
                       static_cast<double>(used - seg_len);
    double diff = leave_out - mean;
    ss += diff * diff;
  }
  const double g = static_cast<double>(opt.segments);
  SirEstimate est;
  est.bits = mean - h_y_given_x;
  est.std_error = std::sqrt((g - 1.0) / g * ss);
  est.samples = used;
  return est;
}

double ebno_limit(const ChannelPoly& h, const Rational& rate, const EbnoLimitOptions& opt) {
  const double r = rate.value();
  if (r <= 0.0 || r >= 1.0) throw std::invalid_argument("ebno_limit: rate must be in (0,1)");

  std::uint64_t probe_counter = 0;
  auto sir_at = [&](double ebno_db) {
    NoiseModel noise = NoiseModel::from_ebno_db(ebno_db, r);
    long long n = opt.initial_samples;
    for (;;) {
      Rng rng = Rng::stream(opt.seed, probe_counter++);
      SirEstimate est = estimate_sir(h, noise, n, rng);
      if (est.std_error < opt.target_std_error || n >= opt.max_samples) return est.bits;
      n = std::min(opt.max_samples, n * 4);
    }
  };

  double lo = opt.lo_db, hi = opt.hi_db;
  if (sir_at(lo) >= r || sir_at(hi) <= r)
    throw std::invalid_argument("ebno_limit: [lo,hi] does not bracket the rate crossing");
  while (hi - lo > opt.resolution_db) {
    double mid = 0.5 * (lo + hi);
    (sir_at(mid) < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace isildpc
