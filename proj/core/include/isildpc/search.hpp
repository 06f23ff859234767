#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isildpc/exit_surface.hpp"
#include "isildpc/pexit.hpp"
#include "isildpc/protomatrix.hpp"

namespace isildpc {

// Knobs shared by the three search procedures. The base search template is
// the fixed 3x6 structure with one degree-1 and one degree-2 column; free
// cells take x values in {0,1,2} (y values {1,2,3,4} for the last column)
// under the protected-row sum >= 3 constraints.
struct SearchSpec {
  std::vector<int> x_values = {0, 1, 2};
  std::vector<int> y_values = {1, 2, 3, 4};
  double bracket_lo_db = 0.0;
  double bracket_hi_db = 6.0;
  double fine_resolution_db = 0.05;
  int fine_max_iter = 1000;
  // prefilter: rank everything cheaply, fully evaluate the best fraction
  double coarse_resolution_db = 0.5;
  int coarse_max_iter = 150;
  double keep_fraction = 0.05;
  double audit_fraction = 0.01;
  double audit_slack_db = 0.1;
  std::uint64_t seed = 1;
  int workers = 0;
  long long candidate_cap = 0;  // 0 = unlimited
};

// Threshold with saturating bracket semantics: +inf when hi_db does not
// converge, lo_db when lo_db already converges.
double threshold_or_inf(const Protomatrix& p, const ExitSurface& surface, double lo_db,
                        double hi_db, double resolution_db, const PexitOptions& opt);

std::vector<Protomatrix> enumerate_base_candidates(const SearchSpec& spec);

struct RankedCandidate {
  Protomatrix matrix;
  double threshold_db;
};

struct BaseSearchReport {
  long long feasible_count = 0;
  long long evaluated_coarse = 0;
  long long evaluated_fine = 0;
  std::vector<RankedCandidate> ranked;  // fully evaluated survivors, ascending
  bool audit_ok = true;
  int audit_checked = 0;
  double audit_worst_margin_db = 0.0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string spec_json;
  std::string to_json() const;

  const Protomatrix& best() const { return ranked.front().matrix; }
  double best_threshold_db() const { return ranked.front().threshold_db; }
};

BaseSearchReport search_base_rate_half(const SearchSpec& spec, const ExitSurface& surface,
                                       const ExitSurface* coarse_surface = nullptr);

struct NestedStepReport {
  ExtensionColumns ext;
  Protomatrix child;
  double threshold_db = 0.0;
  long long candidates = 0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string spec_json;
  std::string to_json() const;
};

// Exhaustive search over extension-column tuples (entries in {0,1,2},
// protected rows sum >= 3 per column) minimizing the child threshold.
NestedStepReport search_nested_step(const Protomatrix& parent, const ExitSurface& surface,
                                    int n_new_cols = 3, const SearchSpec& spec = {});

struct RcStepReport {
  RcExtension ext;  // single A row
  Protomatrix child;
  double threshold_db = 0.0;
  long long evaluated = 0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string spec_json;
  std::string to_json() const;
};

// Seeded randomized hill climb over A rows with entries in {0,1,2} and edge
// count in [5,12]; budget counts threshold evaluations.
RcStepReport search_rc_step(const Protomatrix& parent, const ExitSurface& surface,
                            long long budget, const SearchSpec& spec = {});

}  // namespace isildpc
