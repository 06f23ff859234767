#include "isildpc/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "isildpc/parallel.hpp"
#include "isildpc/rng.hpp"

namespace isildpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// deterministic tie-breaks: threshold, then total edges, then entries
bool candidate_less(double ta, const Protomatrix& a, double tb, const Protomatrix& b) {
  if (ta != tb) return ta < tb;
  if (a.total_edges() != b.total_edges()) return a.total_edges() < b.total_edges();
  return a.serialize() < b.serialize();
}

std::vector<std::vector<int>> feasible_pair_columns(const std::vector<int>& values) {
  // column vectors (top, mid, bot) with mid + bot >= 3
  std::vector<std::vector<int>> cols;
  for (int top : values)
    for (int mid : values)
      for (int bot : values)
        if (mid + bot >= 3) cols.push_back({top, mid, bot});
  return cols;
}

nlohmann::json spec_echo(const SearchSpec& spec) {
  return nlohmann::json{{"x_values", spec.x_values},
                        {"y_values", spec.y_values},
                        {"bracket_lo_db", spec.bracket_lo_db},
                        {"bracket_hi_db", spec.bracket_hi_db},
                        {"fine_resolution_db", spec.fine_resolution_db},
                        {"fine_max_iter", spec.fine_max_iter},
                        {"coarse_resolution_db", spec.coarse_resolution_db},
                        {"coarse_max_iter", spec.coarse_max_iter},
                        {"keep_fraction", spec.keep_fraction},
                        {"audit_fraction", spec.audit_fraction},
                        {"audit_slack_db", spec.audit_slack_db},
                        {"candidate_cap", spec.candidate_cap}};
}

}  // namespace

double threshold_or_inf(const Protomatrix& p, const ExitSurface& surface, double lo_db,
                        double hi_db, double resolution_db, const PexitOptions& opt) {
  if (!pexit_converges(p, surface, hi_db, opt).converged)
    return std::numeric_limits<double>::infinity();
  if (pexit_converges(p, surface, lo_db, opt).converged) return lo_db;
  while (hi_db - lo_db > resolution_db) {
    double mid = 0.5 * (lo_db + hi_db);
    (pexit_converges(p, surface, mid, opt).converged ? hi_db : lo_db) = mid;
  }
  return 0.5 * (lo_db + hi_db);
}

std::vector<Protomatrix> enumerate_base_candidates(const SearchSpec& spec) {
  const auto x_cols = feasible_pair_columns(spec.x_values);
  std::vector<std::vector<int>> y_cols;
  for (int top : spec.y_values)
    for (int mid : spec.y_values)
      for (int bot : spec.y_values)
        if (mid + bot >= 3) y_cols.push_back({top, mid, bot});

  std::vector<Protomatrix> out;
  for (const auto& c3 : x_cols)
    for (const auto& c4 : x_cols)
      for (const auto& c5 : x_cols)
        for (const auto& c6 : y_cols) {
          std::vector<int> e = {1, 0, c3[0], c4[0], c5[0], c6[0],
                                0, 1, c3[1], c4[1], c5[1], c6[1],
                                0, 1, c3[2], c4[2], c5[2], c6[2]};
          out.emplace_back(3, 6, std::move(e));
          if (spec.candidate_cap > 0 &&
              static_cast<long long>(out.size()) >= spec.candidate_cap)
            return out;
        }
  return out;
}

BaseSearchReport search_base_rate_half(const SearchSpec& spec, const ExitSurface& surface,
                                       const ExitSurface* coarse_surface) {
  const auto t0 = Clock::now();
  const ExitSurface& coarse = coarse_surface ? *coarse_surface : surface;

  std::vector<Protomatrix> candidates = enumerate_base_candidates(spec);
  BaseSearchReport report;
  report.seed = spec.seed;
  report.spec_json = spec_echo(spec).dump();
  report.feasible_count = static_cast<long long>(candidates.size());
  if (candidates.empty()) throw std::invalid_argument("search: empty feasible set");

  const PexitOptions coarse_opt{spec.coarse_max_iter, 1e-4, 1e-12};
  const PexitOptions fine_opt{spec.fine_max_iter, 1e-4, 1e-12};
  const int workers = spec.workers > 0 ? spec.workers : default_workers();

  std::vector<double> coarse_th(candidates.size());
  parallel_for_indexed(candidates.size(), workers, [&](std::size_t i) {
    coarse_th[i] = threshold_or_inf(candidates[i], coarse, spec.bracket_lo_db,
                                    spec.bracket_hi_db, spec.coarse_resolution_db, coarse_opt);
  });
  report.evaluated_coarse = static_cast<long long>(candidates.size());

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidate_less(coarse_th[a], candidates[a], coarse_th[b], candidates[b]);
  });

  const std::size_t keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(spec.keep_fraction * candidates.size())));
  const std::size_t n_survivors = std::min(keep, candidates.size());

  std::vector<double> fine_th(n_survivors);
  parallel_for_indexed(n_survivors, workers, [&](std::size_t i) {
    fine_th[i] = threshold_or_inf(candidates[order[i]], surface, spec.bracket_lo_db,
                                  spec.bracket_hi_db, spec.fine_resolution_db, fine_opt);
  });
  report.evaluated_fine = static_cast<long long>(n_survivors);

  std::vector<std::size_t> fine_order(n_survivors);
  std::iota(fine_order.begin(), fine_order.end(), 0);
  std::sort(fine_order.begin(), fine_order.end(), [&](std::size_t a, std::size_t b) {
    return candidate_less(fine_th[a], candidates[order[a]], fine_th[b], candidates[order[b]]);
  });
  report.ranked.reserve(n_survivors);
  for (std::size_t i : fine_order)
    report.ranked.push_back({candidates[order[i]], fine_th[i]});

  // audit: a random sample of the discarded candidates must not beat the
  // best survivor by more than the slack
  const std::size_t n_discarded = candidates.size() - n_survivors;
  if (n_discarded > 0 && spec.audit_fraction > 0.0) {
    std::size_t n_audit = std::max<std::size_t>(
        1, static_cast<std::size_t>(spec.audit_fraction * static_cast<double>(n_discarded)));
    n_audit = std::min(n_audit, n_discarded);
    Rng rng = Rng::stream(spec.seed, 0xa7d17ULL);
    std::vector<std::size_t> sample(n_audit);
    for (auto& s : sample)
      s = order[n_survivors + static_cast<std::size_t>(rng.below(n_discarded))];
    std::vector<double> audit_th(n_audit);
    parallel_for_indexed(n_audit, workers, [&](std::size_t i) {
      audit_th[i] = threshold_or_inf(candidates[sample[i]], surface, spec.bracket_lo_db,
                                     spec.bracket_hi_db, spec.fine_resolution_db, fine_opt);
    });
    report.audit_checked = static_cast<int>(n_audit);
    double worst = std::numeric_limits<double>::infinity();
    for (double t : audit_th) worst = std::min(worst, t);
    report.audit_worst_margin_db = worst - report.best_threshold_db();
    report.audit_ok = worst >= report.best_threshold_db() - spec.audit_slack_db;
  }

  report.runtime_seconds = seconds_since(t0);
  return report;
}

std::string BaseSearchReport::to_json() const {
  nlohmann::json top = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i)
    top.push_back({{"pm", ranked[i].matrix.serialize()}, {"threshold_db", ranked[i].threshold_db}});
  nlohmann::json j{{"search", "base-rate-half"},
                   {"seed", seed},
                   {"feasible_count", feasible_count},
                   {"evaluated_coarse", evaluated_coarse},
                   {"evaluated_fine", evaluated_fine},
                   {"best_pm", best().serialize()},
                   {"best_threshold_db", best_threshold_db()},
                   {"top", top},
                   {"audit_ok", audit_ok},
                   {"audit_checked", audit_checked},
                   {"audit_worst_margin_db", audit_worst_margin_db},
                   {"runtime_seconds", runtime_seconds},
                   {"spec", nlohmann::json::parse(spec_json)}};
  return j.dump(2);
}

NestedStepReport search_nested_step(const Protomatrix& parent, const ExitSurface& surface,
                                    int n_new_cols, const SearchSpec& spec) {
  if (parent.rows() != 3)
    throw std::invalid_argument("search_nested_step: expected a 3-check nested-family parent");
  if (n_new_cols < 1) throw std::invalid_argument("search_nested_step: need >= 1 new column");
  const auto options = feasible_pair_columns(spec.x_values);
  if (options.empty()) throw std::invalid_argument("search_nested_step: empty feasible set");

  long long total = 1;
  for (int c = 0; c < n_new_cols; ++c) total *= static_cast<long long>(options.size());

  const PexitOptions fine_opt{spec.fine_max_iter, 1e-4, 1e-12};
  const int workers = spec.workers > 0 ? spec.workers : default_workers();
  const auto t0 = Clock::now();

  std::vector<double> th(static_cast<std::size_t>(total));
  std::vector<Protomatrix> children;
  children.reserve(static_cast<std::size_t>(total));
  for (long long idx = 0; idx < total; ++idx) {
    ExtensionColumns ext;
    ext.parent_rows = 3;
    long long rem = idx;
    for (int c = 0; c < n_new_cols; ++c) {
      ext.cols.push_back(options[static_cast<std::size_t>(rem % options.size())]);
      rem /= static_cast<long long>(options.size());
    }
    children.push_back(nest_extend(parent, ext));
  }
  parallel_for_indexed(children.size(), workers, [&](std::size_t i) {
    th[i] = threshold_or_inf(children[i], surface, spec.bracket_lo_db, spec.bracket_hi_db,
                             spec.fine_resolution_db, fine_opt);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < children.size(); ++i)
    if (candidate_less(th[i], children[i], th[best], children[best])) best = i;

  NestedStepReport report{.ext = {3, {}},
                          .child = children[best],
                          .threshold_db = th[best],
                          .candidates = total,
                          .runtime_seconds = seconds_since(t0),
                          .seed = spec.seed,
                          .spec_json = spec_echo(spec).dump()};
  long long rem = static_cast<long long>(best);
  for (int c = 0; c < n_new_cols; ++c) {
    report.ext.cols.push_back(options[static_cast<std::size_t>(rem % options.size())]);
    rem /= static_cast<long long>(options.size());
  }
  return report;
}

std::string NestedStepReport::to_json() const {
  nlohmann::json j{{"search", "nested-step"},
                   {"seed", seed},
                   {"candidates", candidates},
                   {"best_pm", child.serialize()},
                   {"best_threshold_db", threshold_db},
                   {"runtime_seconds", runtime_seconds},
                   {"spec", nlohmann::json::parse(spec_json)}};
  return j.dump(2);
}

namespace {

int row_weight(const std::vector<int>& row) {
  int s = 0;
  for (int v : row) s += v;
  return s;
}

std::vector<int> random_feasible_row(int cols, Rng& rng) {
  // draw entries until the edge count lands in [5,12]
  for (;;) {
    std::vector<int> row(static_cast<std::size_t>(cols), 0);
    int target = 5 + static_cast<int>(rng.below(8));
    int placed = 0;
    while (placed < target) {
      std::size_t pos = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cols)));
      if (row[pos] >= 2) continue;
      ++row[pos];
      ++placed;
    }
    if (row_weight(row) >= 5 && row_weight(row) <= 12) return row;
  }
}

}  // namespace

RcStepReport search_rc_step(const Protomatrix& parent, const ExitSurface& surface,
                            long long budget, const SearchSpec& spec) {
  if (budget < 10) throw std::invalid_argument("search_rc_step: budget must be >= 10");
  const PexitOptions fine_opt{spec.fine_max_iter, 1e-4, 1e-12};
  const auto t0 = Clock::now();
  Rng rng = Rng::stream(spec.seed, 0x5cULL);
  const int cols = parent.cols();

  auto evaluate = [&](const std::vector<int>& row) {
    RcExtension ext{{row}};
    Protomatrix child = rc_extend(parent, ext);
    return std::pair<double, Protomatrix>(
        threshold_or_inf(child, surface, spec.bracket_lo_db, spec.bracket_hi_db,
                         spec.fine_resolution_db, fine_opt),
        std::move(child));
  };

  long long evaluated = 0;
  std::vector<int> best_row;
  double best_th = std::numeric_limits<double>::infinity();
  std::optional<Protomatrix> best_child;

  std::vector<int> current;
  double current_th = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  while (evaluated < budget) {
    if (current.empty() || since_improvement > 2 * cols) {
      current = random_feasible_row(cols, rng);
      auto [th, child] = evaluate(current);
      ++evaluated;
      current_th = th;
      since_improvement = 0;
      if (th < best_th) {
        best_th = th;
        best_row = current;
        best_child = std::move(child);
      }
      continue;
    }
    // single-cell mutation keeping entries in {0,1,2} and weight in [5,12]
    std::vector<int> next = current;
    std::size_t pos = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(cols)));
    int delta = rng.bit() ? 1 : -1;
    next[pos] += delta;
    if (next[pos] < 0 || next[pos] > 2) continue;
    int w = row_weight(next);
    if (w < 5 || w > 12) continue;
    auto [th, child] = evaluate(next);
    ++evaluated;
    if (th <= current_th) {
      if (th < current_th) since_improvement = 0;
      current = next;
      current_th = th;
    } else {
      ++since_improvement;
    }
    if (th < best_th) {
      best_th = th;
      best_row = next;
      best_child = std::move(child);
    }
  }

  if (!best_child) throw std::runtime_error("search_rc_step: no candidate evaluated");
  return RcStepReport{RcExtension{{best_row}}, std::move(*best_child), best_th, evaluated,
                      seconds_since(t0),   spec.seed, spec_echo(spec).dump()};
}

std::string RcStepReport::to_json() const {
  nlohmann::json j{{"search", "rc-step"},
                   {"seed", seed},
                   {"evaluated", evaluated},
                   {"best_pm", child.serialize()},
                   {"best_threshold_db", threshold_db},
                   {"runtime_seconds", runtime_seconds},
                   {"spec", nlohmann::json::parse(spec_json)}};
  return j.dump(2);
}

}  // namespace isildpc
