#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isildpc/channel.hpp"
#include "isildpc/interp.hpp"

namespace isildpc {

// Tabulated detector transfer characteristic I_E = T(I_A, Eb/N0). The Eb/N0
// axis is referenced to `rate_ref` (default 1, i.e. an Es/N0 axis), which
// lets one measured surface serve codes of different rates: a rate-R query
// at e dB lands on the axis at e + 10 log10(R / rate_ref).
class ExitSurface {
 public:
  ExitSurface(std::string channel_id, std::vector<double> ebno_grid, std::vector<double> ia_grid,
              std::vector<double> table, long long samples_per_cell, std::uint64_t seed,
              double rate_ref = 1.0);

  const std::string& channel_id() const { return channel_id_; }
  const std::vector<double>& ebno_grid() const { return ebno_grid_; }
  const std::vector<double>& ia_grid() const { return ia_grid_; }
  const std::vector<double>& table() const { return table_; }
  long long samples_per_cell() const { return samples_; }
  std::uint64_t seed() const { return seed_; }
  double rate_ref() const { return rate_ref_; }

  double at(int e_idx, int ia_idx) const {
    return table_[static_cast<std::size_t>(e_idx) * ia_grid_.size() + ia_idx];
  }

  double axis_value(double ebno_db, double rate) const;
  bool covers_axis(double axis_db) const;
  // Monotone-cubic in I_A, linear in dB. axis_db must be covered.
  double lookup(double ia, double axis_db) const;

 private:
  std::string channel_id_;
  std::vector<double> ebno_grid_;
  std::vector<double> ia_grid_;
  std::vector<double> table_;  // [ebno][ia]
  long long samples_;
  std::uint64_t seed_;
  double rate_ref_;
  std::vector<MonotoneCubic> rows_;
};

struct ExitMeasureOptions {
  long long n_symbols = 200000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = all cores
  double rate_ref = 1.0;
};

// Monte-Carlo measurement of the detector EXIT surface: consistent-Gaussian
// a-priori LLRs of mutual information I_A into the BCJR detector, extrinsic
// mutual information out via the time-average estimator. Post-smoothed to be
// nondecreasing in both axes.
ExitSurface measure_detector_exit(const ChannelPoly& h, std::vector<double> ebno_grid,
                                  std::vector<double> ia_grid, const ExitMeasureOptions& opt);

// CSV "ebno_db,i_a,i_e" plus a JSON metadata sidecar at csv_path + ".json".
void save_surface(const ExitSurface& s, const std::string& csv_path);
ExitSurface load_surface(const std::string& csv_path);

}  // namespace isildpc
