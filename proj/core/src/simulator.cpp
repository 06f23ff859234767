#include "isildpc/simulator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "isildpc/parallel.hpp"

namespace isildpc {

namespace {

constexpr long long kBatchFrames = 64;  // fixed so tallies are worker-invariant

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string plan_to_json(const SimPlan& plan) {
  nlohmann::json j{{"code", plan.code},
                   {"n1", plan.n1},
                   {"n2", plan.n2},
                   {"lift_seed", plan.lift_seed},
                   {"channel", plan.channel},
                   {"ebno_db", plan.ebno_db},
                   {"stop", {{"min_frame_errors", plan.stop.min_frame_errors},
                             {"max_frames", plan.stop.max_frames}}},
                   {"seed", plan.seed},
                   {"receiver", nlohmann::json::parse(decode_config_to_json(plan.receiver))},
                   {"fer_floor", plan.fer_floor}};
  return j.dump(2);
}

SimPlan plan_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  SimPlan plan;
  plan.code = j.value("code", plan.code);
  plan.n1 = j.value("n1", plan.n1);
  plan.n2 = j.value("n2", plan.n2);
  plan.lift_seed = j.value("lift_seed", plan.lift_seed);
  plan.channel = j.value("channel", plan.channel);
  plan.ebno_db = j.value("ebno_db", plan.ebno_db);
  if (j.contains("stop")) {
    plan.stop.min_frame_errors = j["stop"].value("min_frame_errors", plan.stop.min_frame_errors);
    plan.stop.max_frames = j["stop"].value("max_frames", plan.stop.max_frames);
  }
  plan.seed = j.value("seed", plan.seed);
  if (j.contains("receiver")) plan.receiver = decode_config_from_json(j["receiver"].dump());
  plan.fer_floor = j.value("fer_floor", plan.fer_floor);
  if (plan.ebno_db.empty()) throw std::invalid_argument("plan: empty ebno_db list");
  if (plan.stop.min_frame_errors < 1) throw std::invalid_argument("plan: min_frame_errors < 1");
  return plan;
}

QcCode load_plan_code(const SimPlan& plan) {
  if (ends_with(plan.code, ".qc")) return qc_parse(read_file(plan.code));
  Protomatrix p = ends_with(plan.code, ".pm") ? Protomatrix::parse(read_file(plan.code))
                                              : builtin_code(plan.code);
  TannerGraph g = peg_lift_stage1(p, plan.n1, plan.lift_seed);
  return circulant_lift_stage2(g, plan.n2, plan.lift_seed);
}

SimPointResult run_point(const Receiver& receiver, const ChannelPoly& channel,
                         const SimPlan& plan, double ebno_db, const TamperHook& tamper) {
  const auto t0 = std::chrono::steady_clock::now();
  const Encoder& encoder = receiver.encoder();
  const int n = encoder.n(), k = encoder.k();
  const double rate = static_cast<double>(k) / n;
  const NoiseModel noise = NoiseModel::from_ebno_db(ebno_db, rate);
  const int workers = plan.workers > 0 ? plan.workers : default_workers();

  struct FrameOutcome {
    int bit_errors = 0;
    bool frame_error = false;
  };

  SimPointResult result;
  result.ebno_db = ebno_db;
  long long next_frame = 0;
  bool done = false;
  while (!done) {
    const long long batch = std::min(kBatchFrames, plan.stop.max_frames - next_frame);
    if (batch <= 0) {
      result.hit_max_frames = true;
      break;
    }
    std::vector<FrameOutcome> outcomes(static_cast<std::size_t>(batch));
    parallel_for_indexed(static_cast<std::size_t>(batch), workers, [&](std::size_t b) {
      const long long frame = next_frame + static_cast<long long>(b);
      Rng rng = Rng::stream(plan.seed, static_cast<std::uint64_t>(frame));
      std::vector<std::uint8_t> payload(static_cast<std::size_t>(k));
      for (auto& bit : payload) bit = rng.bit() ? 1 : 0;
      std::vector<std::uint8_t> codeword = encoder.encode(payload);
      std::vector<double> y = transmit(codeword, channel, noise, rng);
      TurboResult decoded = receiver.run(y, noise, plan.receiver);
      if (tamper) tamper(frame, decoded.payload);
      int errs = 0;
      for (int i = 0; i < k; ++i)
        errs += decoded.payload[static_cast<std::size_t>(i)] != payload[static_cast<std::size_t>(i)];
      outcomes[b] = {errs, errs > 0};
    });
    for (long long b = 0; b < batch; ++b) {
      const auto& o = outcomes[static_cast<std::size_t>(b)];
      ++result.frames;
      result.bit_errors += o.bit_errors;
      result.frame_errors += o.frame_error ? 1 : 0;
      if (result.frame_errors >= plan.stop.min_frame_errors) {
        done = true;
        break;
      }
    }
    next_frame += batch;
    if (!done && next_frame >= plan.stop.max_frames) {
      result.hit_max_frames = true;
      done = true;
    }
  }

  result.ber = result.frames > 0
                   ? static_cast<double>(result.bit_errors) / (static_cast<double>(result.frames) * k)
                   : 0.0;
  result.fer = result.frames > 0
                   ? static_cast<double>(result.frame_errors) / static_cast<double>(result.frames)
                   : 0.0;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SimResult run_sweep(const SimPlan& plan) {
  if (plan.ebno_db.empty()) throw std::invalid_argument("run_sweep: empty Eb/N0 list");
  const ChannelPoly channel = ChannelPoly::parse(plan.channel);
  const QcCode code = load_plan_code(plan);
  const Receiver receiver(code, channel);

  SimResult result;
  result.plan = plan;
  result.payload_bits = receiver.encoder().k();
  result.block_length = receiver.encoder().n();

  for (double e : plan.ebno_db) {
    result.points.push_back(run_point(receiver, channel, plan, e));
    const auto& pt = result.points.back();
    if (plan.fer_floor > 0.0 && pt.fer < plan.fer_floor) {
      result.flags.push_back("sweep stopped early: FER below floor at " + std::to_string(e) +
                             " dB");
      break;
    }
  }

  // FER should fall with Eb/N0 up to binomial noise; violations are flagged
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const auto& a = result.points[i - 1];
    const auto& b = result.points[i];
    if (a.frames == 0 || b.frames == 0) continue;
    double se = std::sqrt(a.fer * (1 - a.fer) / a.frames + b.fer * (1 - b.fer) / b.frames);
    if (b.fer > a.fer + 3.0 * se + 1e-12)
      result.flags.push_back("non-monotone FER between " + std::to_string(a.ebno_db) + " and " +
                             std::to_string(b.ebno_db) + " dB");
  }
  return result;
}

std::string sim_result_csv(const SimResult& r) {
  std::ostringstream out;
  out << "ebno_db,frames,bit_errors,frame_errors,ber,fer,seconds\n";
  char buf[160];
  for (const auto& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%lld,%lld,%lld,%.17g,%.17g,%.3f\n", p.ebno_db, p.frames,
                  p.bit_errors, p.frame_errors, p.ber, p.fer, p.seconds);
    out << buf;
  }
  return out.str();
}

}  // namespace isildpc
