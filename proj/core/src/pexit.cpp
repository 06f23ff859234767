#include "isildpc/pexit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "isildpc/jfunction.hpp"

namespace isildpc {

namespace {

struct Edge {
  int row, col, mult;
};

inline double sq(double x) { return x * x; }

}  // namespace

PexitResult pexit_converges(const Protomatrix& p, const ExitSurface& surface, double ebno_db,
                            const PexitOptions& opt) {
  const int C = p.rows(), V = p.cols();
  const double axis = surface.axis_value(ebno_db, p.rate().value());
  if (!surface.covers_axis(axis))
    throw std::domain_error("pexit: Eb/N0 " + std::to_string(ebno_db) +
                            " dB maps outside the surface grid");

  std::vector<Edge> edges;
  for (int i = 0; i < C; ++i)
    for (int j = 0; j < V; ++j)
      if (p.at(i, j) > 0) edges.push_back({i, j, p.at(i, j)});
  const std::size_t E = edges.size();

  std::vector<char> transmitted(static_cast<std::size_t>(V), 1);
  for (int j : p.punctured()) transmitted[static_cast<std::size_t>(j)] = 0;
  int n_transmitted = p.transmitted_cols();

  std::vector<double> i_ec(E, 0.0), i_ev(E, 0.0);
  std::vector<double> s2_ec(E, 0.0);              // J^-1(I_EC)^2 per edge
  std::vector<double> col_sum(static_cast<std::size_t>(V), 0.0);  // sum_b s2_ec per column
  std::vector<double> row_sum(static_cast<std::size_t>(C), 0.0);
  std::vector<double> s2_ev(E, 0.0);
  std::vector<double> sch2(static_cast<std::size_t>(V), 0.0);

  PexitResult result;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    // (1) detector a-priori from the full variable-node sums, then surface lookup
    double acc = 0.0;
    for (int j = 0; j < V; ++j)
      if (transmitted[static_cast<std::size_t>(j)])
        acc += j_fun_table(std::sqrt(col_sum[static_cast<std::size_t>(j)]));
    const double ia_det = acc / n_transmitted;
    const double i_det = surface.lookup(ia_det, axis);
    const double sch2_tx = sq(j_inv(i_det));
    for (int j = 0; j < V; ++j)
      sch2[static_cast<std::size_t>(j)] = transmitted[static_cast<std::size_t>(j)] ? sch2_tx : 0.0;

    // (2) variable -> check
    for (std::size_t e = 0; e < E; ++e) {
      double r = col_sum[static_cast<std::size_t>(edges[e].col)] - s2_ec[e] +
                 sch2[static_cast<std::size_t>(edges[e].col)];
      i_ev[e] = j_fun_table(std::sqrt(r < 0.0 ? 0.0 : r));
    }

    // (3) check -> variable
    std::fill(row_sum.begin(), row_sum.end(), 0.0);
    for (std::size_t e = 0; e < E; ++e) {
      s2_ev[e] = sq(j_inv(1.0 - i_ev[e]));
      row_sum[static_cast<std::size_t>(edges[e].row)] += edges[e].mult * s2_ev[e];
    }
    double max_change = 0.0;
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    for (std::size_t e = 0; e < E; ++e) {
      double r = row_sum[static_cast<std::size_t>(edges[e].row)] - s2_ev[e];
      double fresh = 1.0 - j_fun_table(std::sqrt(r < 0.0 ? 0.0 : r));
      max_change = std::max(max_change, std::fabs(fresh - i_ec[e]));
      i_ec[e] = fresh;
      s2_ec[e] = sq(j_inv(fresh));
      col_sum[static_cast<std::size_t>(edges[e].col)] += edges[e].mult * s2_ec[e];
    }

    // (4) a-posteriori MI per column
    double min_app = 1.0;
    for (int j = 0; j < V; ++j) {
      double app = j_fun_table(
          std::sqrt(sch2[static_cast<std::size_t>(j)] + col_sum[static_cast<std::size_t>(j)]));
      min_app = std::min(min_app, app);
    }
    result.iterations = iter;
    result.min_app_mi = min_app;
    if (min_app >= 1.0 - opt.eps) {
      result.converged = true;
      return result;
    }
    if (max_change < opt.stall_tol) break;
  }
  return result;
}

double threshold_search(const Protomatrix& p, const ExitSurface& surface, double lo_db,
                        double hi_db, double resolution_db, const PexitOptions& opt) {
  if (!(lo_db < hi_db)) throw std::invalid_argument("threshold_search: lo >= hi");
  if (pexit_converges(p, surface, lo_db, opt).converged)
    throw std::invalid_argument("threshold_search: already converged at the lower bracket");
  if (!pexit_converges(p, surface, hi_db, opt).converged)
    throw std::invalid_argument("threshold_search: not converged at the upper bracket");
  while (hi_db - lo_db > resolution_db) {
    double mid = 0.5 * (lo_db + hi_db);
    (pexit_converges(p, surface, mid, opt).converged ? hi_db : lo_db) = mid;
  }
  return 0.5 * (lo_db + hi_db);
}

}  // namespace isildpc
