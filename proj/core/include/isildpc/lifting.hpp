#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isildpc/protomatrix.hpp"
#include "isildpc/sparse.hpp"

namespace isildpc {

// Variable-node processing order for PEG. ByDegree is the default
// construction heuristic; ByIndex keeps nested-family prefixes aligned so a
// lower-rate member's lift is an exact substructure of the larger one.
enum class PegOrder { ByDegree, ByIndex };

// Stage-1 lifted binary Tanner graph. Check copy r of protograph row i has
// node id i*lift + r; variable copies likewise.
struct TannerGraph {
  struct Edge {
    int check;
    int var;
  };

  int proto_rows = 0;
  int proto_cols = 0;
  int lift = 1;
  std::vector<Edge> edges;

  int n_checks() const { return proto_rows * lift; }
  int n_vars() const { return proto_cols * lift; }
};

// Lifts each protomatrix cell b(i,j) into b disjoint lift x lift permutation
// sub-blocks (so no parallel edges remain), placing edges PEG-style to
// maximize local girth with seeded random tie-breaks.
TannerGraph peg_lift_stage1(const Protomatrix& p, int n1 = 4, std::uint64_t seed = 1,
                            PegOrder order = PegOrder::ByDegree);

// Two-stage-lifted quasi-cyclic code: one circulant shift per stage-1 edge.
struct QcCode {
  TannerGraph graph;
  int n2 = 1;
  std::vector<int> shifts;  // parallel to graph.edges

  long long block_length() const { return static_cast<long long>(graph.n_vars()) * n2; }
  long long payload_bits() const {
    return static_cast<long long>(graph.proto_cols - graph.proto_rows) * graph.lift * n2;
  }
};

// Assigns circulant shifts edge by edge in PEG order, choosing each shift to
// maximize the shortest cycle through the new edge; candidate shifts are
// scanned in a seeded random order.
QcCode circulant_lift_stage2(const TannerGraph& g, int n2, std::uint64_t seed = 1,
                             PegOrder order = PegOrder::ByDegree);

// Drops the last `levels` rate-compatible extension steps (one check row and
// one variable column each), yielding the higher-rate member's lift.
QcCode remove_rc_extension(const QcCode& q, int levels);

inline constexpr int kGirthInfinite = 1 << 30;

struct GirthReport {
  int girth = kGirthInfinite;  // kGirthInfinite when the graph is a forest
  long long four_cycles = 0;
  long long six_cycles = 0;
};

// Exact girth via per-root BFS over (stage-1 node, circulant offset) states,
// plus exact 4- and 6-cycle counts on the expanded graph.
GirthReport girth_of(const QcCode& q);

// Expanded parity-check matrix; row (i*lift + r)*n2 + t', column
// (j*lift + c)*n2 + t, with t' = (t + shift) mod n2 along each edge.
SparseBinaryMatrix to_parity_matrix(const QcCode& q);

// Text format: "C V N1 N2" header, then one "check var shift" line per
// stage-1 edge (stage-1 node ids).
std::string qc_serialize(const QcCode& q);
QcCode qc_parse(const std::string& text);

// MacKay alist export of the expanded matrix.
std::string to_alist(const SparseBinaryMatrix& h);

}  // namespace isildpc
