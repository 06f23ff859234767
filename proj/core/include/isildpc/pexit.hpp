#pragma once

#include "isildpc/exit_surface.hpp"
#include "isildpc/protomatrix.hpp"

namespace isildpc {

struct PexitOptions {
  int max_iter = 1000;
  double eps = 1e-4;
  // a fixed point this far from moving cannot reach convergence within any
  // realistic iteration budget, so the recursion stops early
  double stall_tol = 1e-12;
};

struct PexitResult {
  bool converged = false;
  int iterations = 0;
  double min_app_mi = 0.0;  // worst-column a-posteriori MI at exit
};

// Detector-coupled protograph EXIT recursion at one Eb/N0 point. The
// detector is re-activated every iteration from the fresh check-to-variable
// messages; punctured columns receive zero channel information.
PexitResult pexit_converges(const Protomatrix& p, const ExitSurface& surface, double ebno_db,
                            const PexitOptions& opt = {});

// Bisection for the convergence threshold; requires non-convergence at lo_db
// and convergence at hi_db. Returns the midpoint of the final bracket.
double threshold_search(const Protomatrix& p, const ExitSurface& surface, double lo_db,
                        double hi_db, double resolution_db = 0.05, const PexitOptions& opt = {});

}  // namespace isildpc
