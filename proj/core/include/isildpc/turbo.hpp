#pragma once

#include <memory>
#include <span>

#include "isildpc/bcjr.hpp"
#include "isildpc/bp.hpp"
#include "isildpc/encoder.hpp"
#include "isildpc/lifting.hpp"

namespace isildpc {

struct TurboResult {
  std::vector<std::uint8_t> payload;
  std::vector<std::uint8_t> codeword;  // full decisions
  bool converged = false;              // zero syndrome reached
  int outer_used = 0;
};

// Immutable receiver context for one (code, channel) pair: expanded parity
// matrix, systematic encoder, BP decoder, and channel trellis. Safe to share
// across threads; each run uses only local state.
class Receiver {
 public:
  Receiver(const QcCode& code, const ChannelPoly& channel);
  Receiver(const SparseBinaryMatrix& h, const ChannelPoly& channel);

  const SparseBinaryMatrix& parity() const { return decoder_.parity(); }
  const Encoder& encoder() const { return encoder_; }
  const Trellis& trellis() const { return trellis_; }

  // Turbo equalization: BCJR extrinsics feed the decoder as channel LLRs,
  // decoder extrinsics come back as detector priors. Early exit on zero
  // syndrome; decisions are emitted even without convergence.
  TurboResult run(std::span<const double> y, const NoiseModel& noise,
                  const DecodeConfig& cfg) const;

 private:
  Encoder encoder_;
  BpDecoder decoder_;
  Trellis trellis_;
};

TurboResult turbo_equalize(std::span<const double> y, const QcCode& code, const ChannelPoly& h,
                           const NoiseModel& noise, const DecodeConfig& cfg);

}  // namespace isildpc
