#include "isildpc/exit_surface.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "isildpc/bcjr.hpp"
#include "isildpc/jfunction.hpp"
#include "isildpc/logmath.hpp"
#include "isildpc/parallel.hpp"

namespace isildpc {

namespace {

void require_sorted(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1]))
      throw std::invalid_argument(std::string(what) + " grid is not strictly increasing");
}

// least-squares isotonic regression, nondecreasing, equal weights
void pava(double* v, std::size_t n) {
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[blocks] = v[i];
    weight[blocks] = 1.0;
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
      double w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (level[blocks - 2] * weight[blocks - 2] + level[blocks - 1] * weight[blocks - 1]) / w;
      weight[blocks - 2] = w;
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < count[b]; ++k) v[pos++] = level[b];
}

}  // namespace

ExitSurface::ExitSurface(std::string channel_id, std::vector<double> ebno_grid,
                         std::vector<double> ia_grid, std::vector<double> table,
                         long long samples_per_cell, std::uint64_t seed, double rate_ref)
    : channel_id_(std::move(channel_id)),
      ebno_grid_(std::move(ebno_grid)),
      ia_grid_(std::move(ia_grid)),
      table_(std::move(table)),
      samples_(samples_per_cell),
      seed_(seed),
      rate_ref_(rate_ref) {
  require_sorted(ebno_grid_, "ebno");
  require_sorted(ia_grid_, "i_a");
  if (table_.size() != ebno_grid_.size() * ia_grid_.size())
    throw std::invalid_argument("exit surface: table size does not match grids");
  rows_.reserve(ebno_grid_.size());
  for (std::size_t e = 0; e < ebno_grid_.size(); ++e) {
    std::vector<double> row(table_.begin() + e * ia_grid_.size(),
                            table_.begin() + (e + 1) * ia_grid_.size());
    rows_.emplace_back(ia_grid_, std::move(row));
  }
}

double ExitSurface::axis_value(double ebno_db, double rate) const {
  return ebno_db + 10.0 * std::log10(rate / rate_ref_);
}

bool ExitSurface::covers_axis(double axis_db) const {
  return axis_db >= ebno_grid_.front() - 1e-9 && axis_db <= ebno_grid_.back() + 1e-9;
}

double ExitSurface::lookup(double ia, double axis_db) const {
  if (!covers_axis(axis_db))
    throw std::domain_error("exit surface: Eb/N0 " + std::to_string(axis_db) +
                            " outside the measured grid");
  const auto& g = ebno_grid_;
  if (axis_db <= g.front()) return rows_.front()(ia);
  if (axis_db >= g.back()) return rows_.back()(ia);
  std::size_t lo = 0, hi = g.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (g[mid] <= axis_db ? lo : hi) = mid;
  }
  double t = (axis_db - g[lo]) / (g[lo + 1] - g[lo]);
  return (1.0 - t) * rows_[lo](ia) + t * rows_[lo + 1](ia);
}

ExitSurface measure_detector_exit(const ChannelPoly& h, std::vector<double> ebno_grid,
                                  std::vector<double> ia_grid, const ExitMeasureOptions& opt) {
  require_sorted(ebno_grid, "ebno");
  require_sorted(ia_grid, "i_a");
  if (opt.n_symbols < 100000)
    throw std::invalid_argument("measure_detector_exit: need >= 10^5 symbols per cell");
  const Trellis trellis = make_trellis(h);
  const std::size_t ne = ebno_grid.size(), ni = ia_grid.size();
  std::vector<double> raw(ne * ni, 0.0);
  const long long n = opt.n_symbols;

  int workers = opt.workers > 0 ? opt.workers : default_workers();
  parallel_for_indexed(ne * ni, workers, [&](std::size_t cell) {
    const std::size_t e_idx = cell / ni, ia_idx = cell % ni;
    const double sigma_ch = NoiseModel::from_ebno_db(ebno_grid[e_idx], opt.rate_ref).sigma;
    const double sigma_a = j_inv(ia_grid[ia_idx]);
    Rng rng = Rng::stream(opt.seed, cell);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (auto& b : bits) b = rng.bit() ? 1 : 0;
    NoiseModel noise{sigma_ch};
    std::vector<double> y = transmit(bits, h, noise, rng);
    std::vector<double> prior(static_cast<std::size_t>(n));
    const double mean_a = 0.5 * sigma_a * sigma_a;
    for (std::size_t k = 0; k < prior.size(); ++k) {
      double x = bits[k] ? -1.0 : 1.0;
      prior[k] = x * mean_a + sigma_a * rng.gaussian();
    }
    std::vector<double> ext = bcjr_detect(y, prior, trellis, sigma_ch);
    double acc = 0.0;
    for (std::size_t k = 0; k < ext.size(); ++k) {
      double x = bits[k] ? -1.0 : 1.0;
      acc += softplus2(x * ext[k]);
    }
    double ie = 1.0 - acc / static_cast<double>(n);
    raw[cell] = ie < 0.0 ? 0.0 : (ie > 1.0 ? 1.0 : ie);
  });

  // isotonic in I_A per row, then nondecreasing along Eb/N0: the average of
  // the forward running max and backward running min preserves both axes
  for (std::size_t e = 0; e < ne; ++e) pava(&raw[e * ni], ni);
  std::vector<double> fwd(raw), bwd(raw);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t e = 1; e < ne; ++e)
      fwd[e * ni + i] = std::max(fwd[e * ni + i], fwd[(e - 1) * ni + i]);
    for (std::size_t e = ne - 1; e-- > 0;)
      bwd[e * ni + i] = std::min(bwd[e * ni + i], bwd[(e + 1) * ni + i]);
  }
  for (std::size_t c = 0; c < raw.size(); ++c) {
    double v = 0.5 * (fwd[c] + bwd[c]);
    raw[c] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }

  return ExitSurface(h.id, std::move(ebno_grid), std::move(ia_grid), std::move(raw), n, opt.seed,
                     opt.rate_ref);
}

void save_surface(const ExitSurface& s, const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "ebno_db,i_a,i_e\n";
  char buf[96];
  for (std::size_t e = 0; e < s.ebno_grid().size(); ++e) {
    for (std::size_t i = 0; i < s.ia_grid().size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.ebno_grid()[e], s.ia_grid()[i],
                    s.at(static_cast<int>(e), static_cast<int>(i)));
      csv << buf;
    }
  }
  nlohmann::json meta{{"channel", s.channel_id()},
                      {"rate_ref", s.rate_ref()},
                      {"samples_per_cell", s.samples_per_cell()},
                      {"seed", s.seed()},
                      {"ebno_grid", s.ebno_grid()},
                      {"ia_grid", s.ia_grid()}};
  std::ofstream js(csv_path + ".json");
  if (!js) throw std::runtime_error("cannot write " + csv_path + ".json");
  js << meta.dump(2) << '\n';
}

ExitSurface load_surface(const std::string& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot read " + csv_path);
  std::string line;
  if (!std::getline(csv, line) || line != "ebno_db,i_a,i_e")
    throw std::runtime_error(csv_path + ": not an EXIT surface CSV");
  std::vector<double> ebno, ia, val;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    double e, a, v;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &e, &a, &v) != 3)
      throw std::runtime_error(csv_path + ": malformed row '" + line + "'");
    if (ebno.empty() || e != ebno.back()) ebno.push_back(e);
    if (ebno.size() == 1) ia.push_back(a);
    val.push_back(v);
  }
  std::string channel = "unknown";
  double rate_ref = 1.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::ifstream js(csv_path + ".json");
  if (js) {
    nlohmann::json meta = nlohmann::json::parse(js);
    channel = meta.value("channel", channel);
    rate_ref = meta.value("rate_ref", rate_ref);
    samples = meta.value("samples_per_cell", samples);
    seed = meta.value("seed", seed);
  }
  return ExitSurface(channel, std::move(ebno), std::move(ia), std::move(val), samples, seed,
                     rate_ref);
}

}  // namespace isildpc
