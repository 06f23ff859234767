#include "isildpc/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace isildpc {

namespace {

// Gallager involution f(x) = -ln tanh(x/2), the check-node magnitude kernel
inline double gallager_f(double x) {
  if (x < 1e-12) x = 1e-12;
  if (x > 50.0) return 2.0 * std::exp(-x);
  if (x < 1e-5) return std::log(2.0 / x);
  const double t = std::exp(-x);
  return std::log1p(t) - std::log1p(-t);
}

}  // namespace

std::string decode_config_to_json(const DecodeConfig& cfg) {
  nlohmann::json j{{"outer_iters", cfg.outer_iters},
                   {"bp_iters", cfg.bp_iters},
                   {"llr_clamp", cfg.llr_clamp},
                   {"check_rule", cfg.check_rule == CheckRule::TanhExact ? "tanh" : "min-sum"}};
  return j.dump();
}

DecodeConfig decode_config_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  DecodeConfig cfg;
  cfg.outer_iters = j.value("outer_iters", cfg.outer_iters);
  cfg.bp_iters = j.value("bp_iters", cfg.bp_iters);
  cfg.llr_clamp = j.value("llr_clamp", cfg.llr_clamp);
  std::string rule = j.value("check_rule", std::string("tanh"));
  if (rule == "tanh")
    cfg.check_rule = CheckRule::TanhExact;
  else if (rule == "min-sum")
    cfg.check_rule = CheckRule::MinSum;
  else
    throw std::invalid_argument("decode config: unknown check_rule '" + rule + "'");
  if (cfg.outer_iters <= 0 || cfg.bp_iters < 0 || cfg.llr_clamp <= 0.0)
    throw std::invalid_argument("decode config: non-positive field");
  return cfg;
}

BpDecoder::BpDecoder(const SparseBinaryMatrix& h) : h_(h) {}

BpResult BpDecoder::decode(std::span<const double> channel_llr, const DecodeConfig& cfg) const {
  const int n = h_.cols(), m = h_.rows();
  if (static_cast<int>(channel_llr.size()) != n)
    throw std::invalid_argument("bp_decode: LLR length does not match the code length");
  const std::size_t nnz = static_cast<std::size_t>(h_.nnz());

  BpResult result;
  result.bits.resize(static_cast<std::size_t>(n));
  result.extrinsic.assign(static_cast<std::size_t>(n), 0.0);

  auto harden = [&](const std::vector<double>& posterior) {
    for (int v = 0; v < n; ++v) result.bits[static_cast<std::size_t>(v)] = posterior[static_cast<std::size_t>(v)] < 0.0 ? 1 : 0;
  };

  if (cfg.bp_iters == 0) {
    std::vector<double> post(channel_llr.begin(), channel_llr.end());
    harden(post);
    result.converged = h_.syndrome_zero(result.bits);
    return result;
  }

  // messages indexed by CSR edge id
  std::vector<double> v2c(nnz), c2v(nnz, 0.0);
  std::vector<double> posterior(static_cast<std::size_t>(n));
  const double clamp = cfg.llr_clamp;

  for (int iter = 1; iter <= cfg.bp_iters; ++iter) {
    // variable -> check
    for (int v = 0; v < n; ++v) {
      const auto ids = h_.col_edge_ids(v);
      double total = channel_llr[static_cast<std::size_t>(v)];
      for (std::int32_t e : ids) total += c2v[static_cast<std::size_t>(e)];
      posterior[static_cast<std::size_t>(v)] = total;
      for (std::int32_t e : ids)
        v2c[static_cast<std::size_t>(e)] =
            std::clamp(total - c2v[static_cast<std::size_t>(e)], -clamp, clamp);
    }

    // check -> variable
    if (cfg.check_rule == CheckRule::TanhExact) {
      for (int r = 0; r < m; ++r) {
        const std::int32_t begin = h_.row_begin(r);
        const std::int32_t end = h_.row_begin(r + 1);
        double fsum = 0.0;
        unsigned sign_all = 0;
        for (std::int32_t e = begin; e < end; ++e) {
          const double x = v2c[static_cast<std::size_t>(e)];
          sign_all ^= x < 0.0;
          fsum += gallager_f(std::fabs(x));
        }
        for (std::int32_t e = begin; e < end; ++e) {
          const double x = v2c[static_cast<std::size_t>(e)];
          const double rest = fsum - gallager_f(std::fabs(x));
          const double mag = std::min(gallager_f(rest > 1e-300 ? rest : 1e-300), clamp);
          const unsigned sign = sign_all ^ (x < 0.0);
          c2v[static_cast<std::size_t>(e)] = sign ? -mag : mag;
        }
      }
    } else {
      for (int r = 0; r < m; ++r) {
        const std::int32_t begin = h_.row_begin(r);
        const std::int32_t end = h_.row_begin(r + 1);
        double min1 = 1e300, min2 = 1e300;
        std::int32_t arg_min = -1;
        unsigned sign_all = 0;
        for (std::int32_t e = begin; e < end; ++e) {
          const double a = std::fabs(v2c[static_cast<std::size_t>(e)]);
          sign_all ^= v2c[static_cast<std::size_t>(e)] < 0.0;
          if (a < min1) {
            min2 = min1;
            min1 = a;
            arg_min = e;
          } else if (a < min2) {
            min2 = a;
          }
        }
        for (std::int32_t e = begin; e < end; ++e) {
          const double mag = std::min(e == arg_min ? min2 : min1, clamp);
          const unsigned sign = sign_all ^ (v2c[static_cast<std::size_t>(e)] < 0.0);
          c2v[static_cast<std::size_t>(e)] = sign ? -mag : mag;
        }
      }
    }

    // fresh posterior and syndrome test
    for (int v = 0; v < n; ++v) {
      double total = channel_llr[static_cast<std::size_t>(v)];
      for (std::int32_t e : h_.col_edge_ids(v)) total += c2v[static_cast<std::size_t>(e)];
      posterior[static_cast<std::size_t>(v)] = total;
    }
    harden(posterior);
    result.iterations = iter;
    if (h_.syndrome_zero(result.bits)) {
      result.converged = true;
      break;
    }
  }

  for (int v = 0; v < n; ++v)
    result.extrinsic[static_cast<std::size_t>(v)] = std::clamp(
        posterior[static_cast<std::size_t>(v)] - channel_llr[static_cast<std::size_t>(v)], -clamp,
        clamp);
  return result;
}

BpResult bp_decode(const SparseBinaryMatrix& h, std::span<const double> channel_llr,
                   const DecodeConfig& cfg) {
  return BpDecoder(h).decode(channel_llr, cfg);
}

}  // namespace isildpc
