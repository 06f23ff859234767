#include "isildpc/turbo.hpp"

#include <stdexcept>

namespace isildpc {

Receiver::Receiver(const QcCode& code, const ChannelPoly& channel)
    : Receiver(to_parity_matrix(code), channel) {}

Receiver::Receiver(const SparseBinaryMatrix& h, const ChannelPoly& channel)
    : encoder_(h), decoder_(h), trellis_(make_trellis(channel)) {}

TurboResult Receiver::run(std::span<const double> y, const NoiseModel& noise,
                          const DecodeConfig& cfg) const {
  const int n = parity().cols();
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("turbo_equalize: sample count " + std::to_string(y.size()) +
                                " does not match code length " + std::to_string(n));
  std::vector<double> det_prior(static_cast<std::size_t>(n), 0.0);
  TurboResult result;
  for (int outer = 1; outer <= cfg.outer_iters; ++outer) {
    std::vector<double> det_ext = bcjr_detect(y, det_prior, trellis_, noise.sigma, cfg.llr_clamp);
    BpResult bp = decoder_.decode(det_ext, cfg);
    result.codeword = std::move(bp.bits);
    result.outer_used = outer;
    if (bp.converged) {
      result.converged = true;
      break;
    }
    det_prior = std::move(bp.extrinsic);
  }
  const auto& sys = encoder_.systematic_positions();
  result.payload.resize(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i)
    result.payload[i] = result.codeword[static_cast<std::size_t>(sys[i])];
  return result;
}

TurboResult turbo_equalize(std::span<const double> y, const QcCode& code, const ChannelPoly& h,
                           const NoiseModel& noise, const DecodeConfig& cfg) {
  Receiver receiver(code, h);
  return receiver.run(y, noise, cfg);
}

}  // namespace isildpc
