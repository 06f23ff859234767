#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isildpc/sparse.hpp"

namespace isildpc {

enum class CheckRule { TanhExact, MinSum };

struct DecodeConfig {
  int outer_iters = 10;  // detector activations in the turbo loop
  int bp_iters = 20;     // BP iterations per activation
  double llr_clamp = 50.0;
  CheckRule check_rule = CheckRule::TanhExact;
};

// JSON with exactly the fields outer_iters, bp_iters, llr_clamp, check_rule.
std::string decode_config_to_json(const DecodeConfig& cfg);
DecodeConfig decode_config_from_json(const std::string& json_text);

struct BpResult {
  std::vector<std::uint8_t> bits;
  std::vector<double> extrinsic;  // posterior minus channel input, clamped
  bool converged = false;
  int iterations = 0;
};

// Flooding-schedule sum-product decoder. Early exit on zero syndrome. With
// bp_iters = 0 the decisions are the channel LLR signs and the extrinsic is
// zero (detector-only operation).
class BpDecoder {
 public:
  explicit BpDecoder(const SparseBinaryMatrix& h);
  BpResult decode(std::span<const double> channel_llr, const DecodeConfig& cfg) const;
  const SparseBinaryMatrix& parity() const { return h_; }

 private:
  SparseBinaryMatrix h_;
};

BpResult bp_decode(const SparseBinaryMatrix& h, std::span<const double> channel_llr,
                   const DecodeConfig& cfg);

}  // namespace isildpc
