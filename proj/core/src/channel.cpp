#include "isildpc/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isildpc {

ChannelPoly ChannelPoly::dicode() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, -s}, "dicode"};
}

ChannelPoly ChannelPoly::epr4() { return {{0.5, 0.5, -0.5, -0.5}, "epr4"}; }

ChannelPoly ChannelPoly::fir(std::vector<double> taps) {
  if (taps.empty()) throw std::invalid_argument("channel: empty tap list");
  std::ostringstream id;
  id << "fir:";
  for (std::size_t i = 0; i < taps.size(); ++i) {
    if (i) id << ',';
    id << taps[i];
  }
  return {std::move(taps), id.str()};
}

ChannelPoly ChannelPoly::parse(const std::string& selector) {
  if (selector == "dicode") return dicode();
  if (selector == "epr4") return epr4();
  if (selector.rfind("fir:", 0) == 0) {
    std::vector<double> taps;
    std::istringstream in(selector.substr(4));
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("channel: bad tap '" + item + "'");
      taps.push_back(v);
    }
    return fir(std::move(taps));
  }
  throw std::invalid_argument("unknown channel selector '" + selector + "'");
}

NoiseModel NoiseModel::from_ebno_db(double ebno_db, double rate) {
  if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("noise: rate must be in (0,1]");
  double snr = std::pow(10.0, ebno_db / 10.0);
  return {std::sqrt(1.0 / (2.0 * rate * snr))};
}

NoiseModel NoiseModel::with_sigma(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("noise: negative sigma");
  return {sigma};
}

double NoiseModel::ebno_db(double rate) const {
  if (sigma <= 0.0) throw std::domain_error("noise: Eb/N0 undefined for sigma = 0");
  return 10.0 * std::log10(1.0 / (2.0 * rate * sigma * sigma));
}

Trellis make_trellis(const ChannelPoly& h) {
  if (h.taps.empty()) throw std::invalid_argument("trellis: empty tap list");
  int memory = h.memory();
  if (memory > 8) throw std::invalid_argument("trellis: channel memory above 8 unsupported");
  Trellis t;
  t.memory = memory;
  t.n_states = 1 << memory;
  t.edges.resize(static_cast<std::size_t>(t.n_states) * 2);
  const int mask = t.n_states - 1;
  for (int state = 0; state < t.n_states; ++state) {
    for (int bit = 0; bit < 2; ++bit) {
      double y = h.taps[0] * (1 - 2 * bit);
      for (int l = 1; l <= memory; ++l) {
        int past_bit = (state >> (l - 1)) & 1;
        y += h.taps[static_cast<std::size_t>(l)] * (1 - 2 * past_bit);
      }
      t.edges[static_cast<std::size_t>(state) * 2 + bit] = {((state << 1) | bit) & mask, y};
    }
  }
  return t;
}

std::vector<double> transmit(std::span<const std::uint8_t> bits, const ChannelPoly& h,
                             const NoiseModel& noise, Rng& rng) {
  if (bits.empty()) throw std::invalid_argument("transmit: empty bit sequence");
  Trellis t = make_trellis(h);
  std::vector<double> y(bits.size());
  int state = 0;  // all-zero bits = all +1 symbols
  for (std::size_t k = 0; k < bits.size(); ++k) {
    const auto& e = t.edge(state, bits[k] & 1);
    y[k] = e.output + (noise.sigma > 0.0 ? noise.sigma * rng.gaussian() : 0.0);
    state = e.next_state;
  }
  return y;
}

}  // namespace isildpc
