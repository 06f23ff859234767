#include "isildpc/lifting.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "isildpc/rng.hpp"

namespace isildpc {

namespace {

std::vector<int> proto_col_order(const Protomatrix& p, PegOrder order) {
  std::vector<int> cols(static_cast<std::size_t>(p.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  if (order == PegOrder::ByDegree)
    std::stable_sort(cols.begin(), cols.end(),
                     [&](int a, int b) { return p.col_sum(a) > p.col_sum(b); });
  return cols;
}

// breadth-first distances from a variable node over the partial stage-1 graph
void stage1_distances(int start_var, const std::vector<std::vector<int>>& var_adj,
                      const std::vector<std::vector<int>>& check_adj,
                      std::vector<int>& check_dist, std::vector<int>& var_dist) {
  std::fill(check_dist.begin(), check_dist.end(), -1);
  std::fill(var_dist.begin(), var_dist.end(), -1);
  var_dist[static_cast<std::size_t>(start_var)] = 0;
  std::vector<int> frontier_vars{start_var}, next_vars;
  std::vector<int> frontier_checks;
  int depth = 0;
  while (!frontier_vars.empty()) {
    frontier_checks.clear();
    for (int v : frontier_vars)
      for (int c : var_adj[static_cast<std::size_t>(v)])
        if (check_dist[static_cast<std::size_t>(c)] < 0) {
          check_dist[static_cast<std::size_t>(c)] = depth + 1;
          frontier_checks.push_back(c);
        }
    next_vars.clear();
    for (int c : frontier_checks)
      for (int v : check_adj[static_cast<std::size_t>(c)])
        if (var_dist[static_cast<std::size_t>(v)] < 0) {
          var_dist[static_cast<std::size_t>(v)] = depth + 2;
          next_vars.push_back(v);
        }
    frontier_vars.swap(next_vars);
    depth += 2;
  }
}

bool try_stage1(const Protomatrix& p, int n1, Rng& rng, PegOrder order, TannerGraph& out) {
  const int C = p.rows(), V = p.cols();
  const int n_checks = C * n1, n_vars = V * n1;
  std::vector<std::vector<int>> var_adj(static_cast<std::size_t>(n_vars));
  std::vector<std::vector<int>> check_adj(static_cast<std::size_t>(n_checks));
  std::vector<TannerGraph::Edge> edges;
  std::vector<int> check_dist(static_cast<std::size_t>(n_checks));
  std::vector<int> var_dist(static_cast<std::size_t>(n_vars));
  std::vector<int> block_deg;
  std::vector<int> ties;

  for (int j : proto_col_order(p, order)) {
    // block degrees for column j: one slot per (proto row, check copy)
    block_deg.assign(static_cast<std::size_t>(C) * n1, 0);
    for (int copy = 0; copy < n1; ++copy) {
      const int v = j * n1 + copy;
      for (int i = 0; i < C; ++i) {
        const int b = p.at(i, j);
        for (int k = 0; k < b; ++k) {
          stage1_distances(v, var_adj, check_adj, check_dist, var_dist);
          int best_dist = -2, best_spare = -1;
          ties.clear();
          for (int r = 0; r < n1; ++r) {
            const int deg = block_deg[static_cast<std::size_t>(i) * n1 + r];
            if (deg >= b) continue;
            const int cnode = i * n1 + r;
            bool linked = false;
            for (int c2 : var_adj[static_cast<std::size_t>(v)])
              if (c2 == cnode) {
                linked = true;
                break;
              }
            if (linked) continue;
            int d = check_dist[static_cast<std::size_t>(cnode)];
            if (d < 0) d = std::numeric_limits<int>::max();  // unreachable is best
            const int spare = b - deg;
            if (d > best_dist || (d == best_dist && spare > best_spare)) {
              best_dist = d;
              best_spare = spare;
              ties.clear();
              ties.push_back(cnode);
            } else if (d == best_dist && spare == best_spare) {
              ties.push_back(cnode);
            }
          }
          if (ties.empty()) return false;  // blocked block, retry construction
          const int cnode = ties[rng.below(ties.size())];
          ++block_deg[static_cast<std::size_t>(i) * n1 + (cnode - i * n1)];
          var_adj[static_cast<std::size_t>(v)].push_back(cnode);
          check_adj[static_cast<std::size_t>(cnode)].push_back(v);
          edges.push_back({cnode, v});
        }
      }
    }
  }
  out.proto_rows = C;
  out.proto_cols = V;
  out.lift = n1;
  out.edges = std::move(edges);
  return true;
}

}  // namespace

TannerGraph peg_lift_stage1(const Protomatrix& p, int n1, std::uint64_t seed, PegOrder order) {
  if (n1 < p.max_entry())
    throw std::invalid_argument("peg_lift_stage1: lift factor " + std::to_string(n1) +
                                " below max multiplicity " + std::to_string(p.max_entry()) +
                                ", parallel edges unavoidable");
  for (int attempt = 0; attempt < 200; ++attempt) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(attempt));
    TannerGraph g;
    if (try_stage1(p, n1, rng, order, g)) return g;
  }
  throw std::runtime_error("peg_lift_stage1: no feasible placement found");
}

namespace {

struct IncidentEdge {
  int edge_id;
  int other;  // stage-1 node on the far side
};

// adjacency of the stage-1 graph keyed by node: vars [0, NV), checks [NV, NV+NC)
std::vector<std::vector<IncidentEdge>> stage1_adjacency(const TannerGraph& g) {
  std::vector<std::vector<IncidentEdge>> adj(
      static_cast<std::size_t>(g.n_vars() + g.n_checks()));
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const auto& ed = g.edges[static_cast<std::size_t>(e)];
    adj[static_cast<std::size_t>(ed.var)].push_back({e, g.n_vars() + ed.check});
    adj[static_cast<std::size_t>(g.n_vars() + ed.check)].push_back({e, ed.var});
  }
  for (auto& list : adj)
    std::sort(list.begin(), list.end(),
              [](const IncidentEdge& a, const IncidentEdge& b) { return a.other < b.other; });
  return adj;
}

}  // namespace

QcCode circulant_lift_stage2(const TannerGraph& g, int n2, std::uint64_t seed, PegOrder order) {
  if (n2 < 1) throw std::invalid_argument("circulant_lift_stage2: n2 must be >= 1");
  QcCode q;
  q.graph = g;
  q.n2 = n2;
  q.shifts.assign(g.edges.size(), -1);
  Rng rng = Rng::stream(seed, 0x517f7eULL);

  const int NV = g.n_vars(), NC = g.n_checks();
  auto adj = stage1_adjacency(g);

  std::vector<int> var_order(static_cast<std::size_t>(NV));
  std::iota(var_order.begin(), var_order.end(), 0);
  if (order == PegOrder::ByDegree)
    std::stable_sort(var_order.begin(), var_order.end(), [&](int a, int b) {
      return adj[static_cast<std::size_t>(a)].size() > adj[static_cast<std::size_t>(b)].size();
    });

  const std::size_t n_states = static_cast<std::size_t>(NV + NC) * n2;
  std::vector<std::int32_t> dist(n_states);
  std::vector<std::int32_t> queue_buf(n_states);
  std::vector<int> perm(static_cast<std::size_t>(n2));

  for (int v : var_order) {
    for (const auto& inc : adj[static_cast<std::size_t>(v)]) {
      const int e = inc.edge_id;
      if (q.shifts[static_cast<std::size_t>(e)] >= 0) continue;
      // BFS from (v, 0) over assigned edges; offsets accumulate +shift when
      // crossing var->check and -shift back
      std::fill(dist.begin(), dist.end(), -1);
      std::size_t head = 0, tail = 0;
      const std::size_t start = static_cast<std::size_t>(v) * n2;
      dist[start] = 0;
      queue_buf[tail++] = static_cast<std::int32_t>(start);
      while (head < tail) {
        const std::int32_t cur = queue_buf[head++];
        const int node = static_cast<int>(cur / n2);
        const int off = static_cast<int>(cur % n2);
        const std::int32_t d = dist[static_cast<std::size_t>(cur)];
        for (const auto& ie : adj[static_cast<std::size_t>(node)]) {
          const int s = q.shifts[static_cast<std::size_t>(ie.edge_id)];
          if (s < 0) continue;
          const int noff = node < NV ? (off + s) % n2 : (off - s + n2) % n2;
          const std::size_t nxt = static_cast<std::size_t>(ie.other) * n2 + noff;
          if (dist[nxt] < 0) {
            dist[nxt] = d + 1;
            queue_buf[tail++] = static_cast<std::int32_t>(nxt);
          }
        }
      }
      // local girth for candidate shift s is 1 + dist to (check, s)
      const std::size_t check_base = static_cast<std::size_t>(inc.other) * n2;
      for (int i = 0; i < n2; ++i) perm[static_cast<std::size_t>(i)] = i;
      for (int i = n2 - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
      int best_shift = perm[0];
      long long best_girth = -1;
      for (int s : perm) {
        const std::int32_t d = dist[check_base + static_cast<std::size_t>(s)];
        const long long girth = d < 0 ? std::numeric_limits<long long>::max() : d + 1;
        if (girth > best_girth) {
          best_girth = girth;
          best_shift = s;
          if (d < 0) break;  // nothing beats an unreachable target
        }
      }
      q.shifts[static_cast<std::size_t>(e)] = best_shift;
    }
  }
  return q;
}

QcCode remove_rc_extension(const QcCode& q, int levels) {
  if (levels < 0 || levels >= q.graph.proto_rows || levels >= q.graph.proto_cols)
    throw std::invalid_argument("remove_rc_extension: level count out of range");
  const int keep_rows = q.graph.proto_rows - levels;
  const int keep_cols = q.graph.proto_cols - levels;
  const int n1 = q.graph.lift;
  QcCode out;
  out.graph.proto_rows = keep_rows;
  out.graph.proto_cols = keep_cols;
  out.graph.lift = n1;
  out.n2 = q.n2;
  for (std::size_t e = 0; e < q.graph.edges.size(); ++e) {
    const auto& ed = q.graph.edges[e];
    const bool check_kept = ed.check < keep_rows * n1;
    const bool var_kept = ed.var < keep_cols * n1;
    if (check_kept && !var_kept)
      throw std::invalid_argument(
          "remove_rc_extension: kept check touches a removed column; not an rc-extended code");
    if (check_kept && var_kept) {
      out.graph.edges.push_back(ed);
      out.shifts.push_back(q.shifts[e]);
    }
  }
  return out;
}

GirthReport girth_of(const QcCode& q) {
  GirthReport report;
  const auto& g = q.graph;
  const int NV = g.n_vars(), NC = g.n_checks();
  const int n2 = q.n2;
  auto adj = stage1_adjacency(g);

  // girth: BFS from (v, 0) for every stage-1 variable node; rotation symmetry
  // covers the other circulant copies
  const std::size_t n_states = static_cast<std::size_t>(NV + NC) * n2;
  std::vector<std::int32_t> dist(n_states), parent_edge(n_states);
  std::vector<std::int32_t> queue_buf(n_states);
  int best = kGirthInfinite;
  for (int v = 0; v < NV; ++v) {
    std::fill(dist.begin(), dist.end(), -1);
    std::size_t head = 0, tail = 0;
    const std::size_t start = static_cast<std::size_t>(v) * n2;
    dist[start] = 0;
    parent_edge[start] = -1;
    queue_buf[tail++] = static_cast<std::int32_t>(start);
    while (head < tail) {
      const std::int32_t cur = queue_buf[head++];
      const std::int32_t d = dist[static_cast<std::size_t>(cur)];
      if (2 * d + 1 >= best) break;
      const int node = static_cast<int>(cur / n2);
      const int off = static_cast<int>(cur % n2);
      for (const auto& ie : adj[static_cast<std::size_t>(node)]) {
        if (ie.edge_id == parent_edge[static_cast<std::size_t>(cur)]) continue;
        const int s = q.shifts[static_cast<std::size_t>(ie.edge_id)];
        const int noff = node < NV ? (off + s) % n2 : (off - s + n2) % n2;
        const std::size_t nxt = static_cast<std::size_t>(ie.other) * n2 + noff;
        if (dist[nxt] < 0) {
          dist[nxt] = d + 1;
          parent_edge[nxt] = ie.edge_id;
          queue_buf[tail++] = static_cast<std::int32_t>(nxt);
        } else {
          best = std::min(best, d + dist[nxt] + 1);
        }
      }
    }
  }
  report.girth = best;

  // exact small-cycle counts on the expanded graph
  std::vector<std::vector<std::int32_t>> var_nbrs(static_cast<std::size_t>(NV) * n2);
  std::vector<std::vector<std::int32_t>> check_nbrs(static_cast<std::size_t>(NC) * n2);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    const int s = q.shifts[e];
    for (int t = 0; t < n2; ++t) {
      const std::int32_t vv = static_cast<std::int32_t>(ed.var) * n2 + t;
      const std::int32_t cc = static_cast<std::int32_t>(ed.check) * n2 + (t + s) % n2;
      var_nbrs[static_cast<std::size_t>(vv)].push_back(cc);
      check_nbrs[static_cast<std::size_t>(cc)].push_back(vv);
    }
  }

  std::unordered_map<std::uint64_t, std::int64_t> pair_count;
  pair_count.reserve(var_nbrs.size() * 4);
  for (const auto& nbrs : var_nbrs)
    for (std::size_t a = 0; a < nbrs.size(); ++a)
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        std::int32_t c1 = std::min(nbrs[a], nbrs[b]), c2 = std::max(nbrs[a], nbrs[b]);
        ++pair_count[(static_cast<std::uint64_t>(c1) << 32) | static_cast<std::uint32_t>(c2)];
      }
  for (const auto& [key, m] : pair_count) report.four_cycles += m * (m - 1) / 2;

  std::vector<std::int32_t> mark(check_nbrs.size(), -1);
  long long walks = 0;
  for (std::int32_t v0 = 0; v0 < static_cast<std::int32_t>(var_nbrs.size()); ++v0) {
    for (std::int32_t c : var_nbrs[static_cast<std::size_t>(v0)])
      mark[static_cast<std::size_t>(c)] = v0;
    for (std::int32_t c0 : var_nbrs[static_cast<std::size_t>(v0)])
      for (std::int32_t v1 : check_nbrs[static_cast<std::size_t>(c0)]) {
        if (v1 == v0) continue;
        for (std::int32_t c1 : var_nbrs[static_cast<std::size_t>(v1)]) {
          if (c1 == c0) continue;
          for (std::int32_t v2 : check_nbrs[static_cast<std::size_t>(c1)]) {
            if (v2 == v0 || v2 == v1) continue;
            for (std::int32_t c2 : var_nbrs[static_cast<std::size_t>(v2)]) {
              if (c2 == c0 || c2 == c1) continue;
              if (mark[static_cast<std::size_t>(c2)] == v0) ++walks;
            }
          }
        }
      }
  }
  report.six_cycles = walks / 6;
  return report;
}

SparseBinaryMatrix to_parity_matrix(const QcCode& q) {
  const long long total = static_cast<long long>(q.graph.edges.size()) * q.n2;
  if (total > 10000000)
    throw std::invalid_argument("to_parity_matrix: expansion exceeds 10^7 edges");
  std::vector<std::pair<int, int>> entries;
  entries.reserve(static_cast<std::size_t>(total));
  for (std::size_t e = 0; e < q.graph.edges.size(); ++e) {
    const auto& ed = q.graph.edges[e];
    const int s = q.shifts[e];
    for (int t = 0; t < q.n2; ++t)
      entries.emplace_back(ed.check * q.n2 + (t + s) % q.n2, ed.var * q.n2 + t);
  }
  return SparseBinaryMatrix(q.graph.n_checks() * q.n2, q.graph.n_vars() * q.n2,
                            std::move(entries));
}

std::string qc_serialize(const QcCode& q) {
  std::ostringstream out;
  out << q.graph.proto_rows << ' ' << q.graph.proto_cols << ' ' << q.graph.lift << ' ' << q.n2
      << '\n';
  for (std::size_t e = 0; e < q.graph.edges.size(); ++e)
    out << q.graph.edges[e].check << ' ' << q.graph.edges[e].var << ' ' << q.shifts[e] << '\n';
  return out.str();
}

QcCode qc_parse(const std::string& text) {
  std::istringstream in(text);
  QcCode q;
  if (!(in >> q.graph.proto_rows >> q.graph.proto_cols >> q.graph.lift >> q.n2))
    throw std::invalid_argument("qc_parse: malformed header");
  if (q.graph.proto_rows <= 0 || q.graph.proto_cols <= 0 || q.graph.lift <= 0 || q.n2 <= 0)
    throw std::invalid_argument("qc_parse: non-positive header field");
  int c, v, s;
  while (in >> c >> v >> s) {
    if (c < 0 || c >= q.graph.n_checks() || v < 0 || v >= q.graph.n_vars() || s < 0 ||
        s >= q.n2)
      throw std::invalid_argument("qc_parse: edge out of range");
    q.graph.edges.push_back({c, v});
    q.shifts.push_back(s);
  }
  if (!in.eof()) throw std::invalid_argument("qc_parse: trailing garbage");
  return q;
}

std::string to_alist(const SparseBinaryMatrix& h) {
  std::ostringstream out;
  const int n = h.cols(), m = h.rows();
  int max_col = 0, max_row = 0;
  for (int c = 0; c < n; ++c) max_col = std::max(max_col, static_cast<int>(h.col(c).size()));
  for (int r = 0; r < m; ++r) max_row = std::max(max_row, static_cast<int>(h.row(r).size()));
  out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
  for (int c = 0; c < n; ++c) out << h.col(c).size() << (c + 1 < n ? ' ' : '\n');
  for (int r = 0; r < m; ++r) out << h.row(r).size() << (r + 1 < m ? ' ' : '\n');
  for (int c = 0; c < n; ++c) {
    const auto rows = h.col(c);
    for (std::size_t i = 0; i < static_cast<std::size_t>(max_col); ++i) {
      if (i) out << ' ';
      out << (i < rows.size() ? rows[i] + 1 : 0);
    }
    out << '\n';
  }
  for (int r = 0; r < m; ++r) {
    const auto cols = h.row(r);
    for (std::size_t i = 0; i < static_cast<std::size_t>(max_row); ++i) {
      if (i) out << ' ';
      out << (i < cols.size() ? cols[i] + 1 : 0);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace isildpc
