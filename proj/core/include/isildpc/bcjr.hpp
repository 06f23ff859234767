#pragma once

#include <span>
#include <vector>

#include "isildpc/channel.hpp"

namespace isildpc {

// Log-MAP forward/backward detection over the channel trellis. Returns
// extrinsic LLRs (posterior minus prior). The initial state is the all-+1
// preload; the terminal state is unconstrained. Exact log-sum-exp, no
// max-log approximation.
std::vector<double> bcjr_detect(std::span<const double> y, std::span<const double> prior_llr,
                                const Trellis& trellis, double sigma,
                                double llr_clamp = kLlrMax);

std::vector<double> bcjr_detect(std::span<const double> y, std::span<const double> prior_llr,
                                const ChannelPoly& h, const NoiseModel& noise,
                                double llr_clamp = kLlrMax);

}  // namespace isildpc
