#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "isildpc/bp.hpp"
#include "isildpc/channel.hpp"
#include "isildpc/lifting.hpp"
#include "isildpc/turbo.hpp"

namespace isildpc {

struct StopRule {
  long long min_frame_errors = 100;
  long long max_frames = 1000000;
};

struct SimPlan {
  std::string code = "isi-1/2";  // builtin name, .pm path, or .qc path
  int n1 = 4;
  int n2 = 100;
  std::uint64_t lift_seed = 7;
  std::string channel = "dicode";
  std::vector<double> ebno_db;
  StopRule stop;
  std::uint64_t seed = 1;
  DecodeConfig receiver;
  double fer_floor = 0.0;  // stop the sweep once a point's FER drops below (0 = off)
  int workers = 0;         // not part of the plan identity; results are worker-invariant
};

std::string plan_to_json(const SimPlan& plan);
SimPlan plan_from_json(const std::string& json_text);

struct SimPointResult {
  double ebno_db = 0.0;
  long long frames = 0;
  long long bit_errors = 0;
  long long frame_errors = 0;
  double ber = 0.0;
  double fer = 0.0;
  double seconds = 0.0;
  bool hit_max_frames = false;
};

struct SimResult {
  SimPlan plan;
  long long payload_bits = 0;
  long long block_length = 0;
  std::vector<SimPointResult> points;
  std::vector<std::string> flags;  // e.g. non-monotone FER warnings
};

// CSV header: ebno_db,frames,bit_errors,frame_errors,ber,fer,seconds
std::string sim_result_csv(const SimResult& r);

// Resolves the plan's code reference into a lifted quasi-cyclic code.
QcCode load_plan_code(const SimPlan& plan);

// Test hook: mutates the payload decisions of chosen frames before they are
// compared (counting-soundness self test).
using TamperHook = std::function<void(long long frame_index, std::vector<std::uint8_t>& decisions)>;

SimPointResult run_point(const Receiver& receiver, const ChannelPoly& channel,
                         const SimPlan& plan, double ebno_db, const TamperHook& tamper = {});

SimResult run_sweep(const SimPlan& plan);

}  // namespace isildpc
