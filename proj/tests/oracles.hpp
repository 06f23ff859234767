#pragma once

// Independent reference computations for the test suites. Everything here is
// deliberately brute-force and kept separate from the library's own
// algorithms so the two sides can disagree.

#include <cmath>
#include <span>
#include <vector>

#include "isildpc/channel.hpp"
#include "isildpc/exit_surface.hpp"

namespace oracle {

inline double lse(double a, double b) {
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Exact posterior LLRs of a short ISI block by enumerating all 2^n inputs.
inline std::vector<double> brute_force_posteriors(std::span<const double> y,
                                                  std::span<const double> prior_llr,
                                                  const std::vector<double>& taps, double sigma) {
  const int n = static_cast<int>(y.size());
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> num(static_cast<std::size_t>(n), -1e308), den(static_cast<std::size_t>(n), -1e308);
  for (long long u = 0; u < (1LL << n); ++u) {
    double logp = 0.0;
    for (int k = 0; k < n; ++k) {
      const int bit = static_cast<int>((u >> k) & 1);
      // prior: P(bit) from L = ln P(0)/P(1)
      const double l = prior_llr[static_cast<std::size_t>(k)];
      logp += bit ? -std::log1p(std::exp(std::min(l, 700.0)))
                  : -std::log1p(std::exp(std::min(-l, 700.0)));
      double mean = 0.0;
      for (std::size_t t = 0; t < taps.size(); ++t) {
        const int idx = k - static_cast<int>(t);
        const int sym = idx < 0 ? 1 : 1 - 2 * static_cast<int>((u >> idx) & 1);
        mean += taps[t] * sym;
      }
      const double d = y[static_cast<std::size_t>(k)] - mean;
      logp -= d * d * inv2s2;
    }
    for (int k = 0; k < n; ++k) {
      if ((u >> k) & 1)
        den[static_cast<std::size_t>(k)] = lse(den[static_cast<std::size_t>(k)], logp);
      else
        num[static_cast<std::size_t>(k)] = lse(num[static_cast<std::size_t>(k)], logp);
    }
  }
  std::vector<double> post(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    post[static_cast<std::size_t>(k)] = num[static_cast<std::size_t>(k)] - den[static_cast<std::size_t>(k)];
  return post;
}

// Binary-input AWGN capacity by Simpson quadrature (y = x + noise, x = +-1).
inline double biawgn_capacity(double sigma) {
  const int steps = 4000;  // even
  const double lo = 1.0 - 12.0 * sigma, hi = 1.0 + 12.0 * sigma;
  const double h = (hi - lo) / steps;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma * sigma);
  auto f = [&](double y) {
    const double d = y - 1.0;
    const double g = norm * std::exp(-d * d / (2.0 * sigma * sigma));
    const double x = 2.0 * y / (sigma * sigma);
    double sp = x > 36.0 ? std::exp(-x) : (x < -36.0 ? -x : std::log1p(std::exp(-x)));
    return g * sp / std::log(2.0);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - acc * h / 3.0;
}

// Eb/N0 (dB) at which BI-AWGN capacity equals the rate.
inline double biawgn_ebno_limit(double rate) {
  double lo = -2.0, hi = 6.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    double sigma = std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, mid / 10.0)));
    (biawgn_capacity(sigma) < rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// All codewords of a parity-check matrix (tiny codes only).
inline std::vector<std::vector<std::uint8_t>> all_codewords(
    const std::vector<std::vector<int>>& h_rows, int n) {
  std::vector<std::vector<std::uint8_t>> words;
  for (long long u = 0; u < (1LL << n); ++u) {
    bool ok = true;
    for (const auto& row : h_rows) {
      unsigned parity = 0;
      for (int c : row) parity ^= static_cast<unsigned>((u >> c) & 1);
      if (parity) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<std::uint8_t> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((u >> k) & 1);
    words.push_back(std::move(w));
  }
  return words;
}

// Maximum-likelihood decision over an explicit codeword list (BPSK, AWGN).
inline std::vector<std::uint8_t> ml_decode(std::span<const double> y,
                                           const std::vector<std::vector<std::uint8_t>>& words) {
  double best = 1e308;
  std::size_t arg = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < words[w].size(); ++k) {
      const double x = words[w][k] ? -1.0 : 1.0;
      const double d = y[k] - x;
      d2 += d * d;
    }
    if (d2 < best) {
      best = d2;
      arg = w;
    }
  }
  return words[arg];
}

// Analytic stand-in for a detector transfer surface: monotone in both axes,
// saturating to 1. Lets graph-side logic be tested without Monte Carlo.
inline isildpc::ExitSurface synthetic_surface(double lo_db, double hi_db, double step_db,
                                              double gain = 1.0) {
  std::vector<double> ebno, ia, table;
  for (double e = lo_db; e <= hi_db + 1e-9; e += step_db) ebno.push_back(e);
  for (int i = 0; i <= 20; ++i) ia.push_back(i / 20.0);
  for (double e : ebno)
    for (double a : ia) {
      const double snr = std::pow(10.0, e / 10.0);
      const double v = 1.0 - std::exp(-gain * snr * (0.35 + 1.2 * a));
      table.push_back(std::min(1.0, std::max(0.0, v)));
    }
  return isildpc::ExitSurface("synthetic", std::move(ebno), std::move(ia), std::move(table), 0, 0,
                              1.0);
}

}  // namespace oracle
