#pragma once

#include <cstdint>

#include "isildpc/channel.hpp"

namespace isildpc {

struct SirEstimate {
  double bits = 0.0;       // i.u.d. information rate, bits per channel use
  double std_error = 0.0;  // jackknife standard error
  long long samples = 0;   // trellis steps after burn-in
};

struct SirOptions {
  int burn_in = 100;
  int segments = 20;
};

// Monte-Carlo symmetric information rate: h(Y) from the trellis forward
// recursion with i.u.d. inputs, minus h(Y|X) = 0.5 log2(2 pi e sigma^2).
SirEstimate estimate_sir(const ChannelPoly& h, const NoiseModel& noise, long long n,
                         Rng& rng, const SirOptions& opt = {});

struct EbnoLimitOptions {
  double lo_db = -5.0;
  double hi_db = 15.0;
  double resolution_db = 0.05;
  double target_std_error = 0.005;
  long long initial_samples = 200000;
  long long max_samples = 16000000;
  std::uint64_t seed = 1;
};

// Smallest Eb/N0 (dB) at which the i.u.d. rate reaches the code rate,
// located by bisection with the Monte-Carlo SIR estimator.
double ebno_limit(const ChannelPoly& h, const Rational& rate, const EbnoLimitOptions& opt = {});

}  // namespace isildpc
