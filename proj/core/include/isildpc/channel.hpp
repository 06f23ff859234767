#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isildpc/protomatrix.hpp"
#include "isildpc/rng.hpp"

namespace isildpc {

// LLR convention throughout: L = ln P(bit=0)/P(bit=1), bit 0 -> symbol +1.
inline constexpr double kLlrMax = 50.0;

// FIR channel polynomial h(D) = h0 + h1 D + ... + hL D^L acting on +-1 symbols.
struct ChannelPoly {
  std::vector<double> taps;
  std::string id;

  int memory() const { return static_cast<int>(taps.size()) - 1; }

  static ChannelPoly dicode();
  static ChannelPoly epr4();
  static ChannelPoly fir(std::vector<double> taps);
  // Selector strings: "dicode", "epr4", or "fir:c0,c1,...".
  static ChannelPoly parse(const std::string& selector);
};

// AWGN level. from_ebno uses sigma^2 = 1 / (2 R 10^(EbN0/10)) with Es = 1
// (both named channels have unit tap energy).
struct NoiseModel {
  double sigma = 0.0;

  static NoiseModel from_ebno_db(double ebno_db, double rate);
  static NoiseModel with_sigma(double sigma);
  double ebno_db(double rate) const;
};

// State machine realization of h(D): state = last `memory` input bits,
// most recent in the LSB. Two outgoing edges per state.
struct Trellis {
  struct Edge {
    int next_state;
    double output;
  };

  int memory = 0;
  int n_states = 1;
  std::vector<Edge> edges;  // [state * 2 + input_bit]

  const Edge& edge(int state, int bit) const { return edges[static_cast<std::size_t>(state) * 2 + bit]; }
};

Trellis make_trellis(const ChannelPoly& h);

// y_k = sum_l h_l x_{k-l} + n_k with x in {+1,-1} (bit 0 -> +1) and the
// channel preloaded with +1 symbols.
std::vector<double> transmit(std::span<const std::uint8_t> bits, const ChannelPoly& h,
                             const NoiseModel& noise, Rng& rng);

}  // namespace isildpc
