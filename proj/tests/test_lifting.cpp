#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "isildpc/encoder.hpp"
#include "isildpc/lifting.hpp"
#include "isildpc/rng.hpp"

using namespace isildpc;

TEST_CASE("stage-1 lift removes parallel edges and preserves degrees") {
  Protomatrix p = builtin_code("isi-1/2");
  TannerGraph g = peg_lift_stage1(p, 4, 1);
  CHECK(g.n_checks() == 12);
  CHECK(g.n_vars() == 24);
  CHECK(g.edges.size() == 20u * 4u);

  std::set<std::pair<int, int>> pairs;
  std::map<int, int> var_deg, check_deg;
  for (const auto& e : g.edges) {
    CHECK(pairs.insert({e.check, e.var}).second);  // no parallel edges
    ++var_deg[e.var];
    ++check_deg[e.check];
  }
  for (int j = 0; j < 6; ++j)
    for (int c = 0; c < 4; ++c) CHECK(var_deg[j * 4 + c] == p.col_sum(j));
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 4; ++r) CHECK(check_deg[i * 4 + r] == p.row_sum(i));

  // the multiplicity-4 cell densifies to the all-ones block
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) CHECK(pairs.count({0 * 4 + r, 5 * 4 + c}) == 1);
}

TEST_CASE("stage-1 rejects a lift factor below the max multiplicity") {
  CHECK_THROWS(peg_lift_stage1(builtin_code("isi-1/2"), 2, 1));
}

TEST_CASE("stage-2 with n2 = 1 reproduces the stage-1 graph") {
  Protomatrix p = builtin_code("isi-1/2");
  TannerGraph g = peg_lift_stage1(p, 4, 3);
  QcCode q = circulant_lift_stage2(g, 1, 3);
  for (int s : q.shifts) CHECK(s == 0);
  SparseBinaryMatrix h = to_parity_matrix(q);
  CHECK(h.rows() == g.n_checks());
  CHECK(h.cols() == g.n_vars());
  CHECK(h.nnz() == static_cast<long long>(g.edges.size()));
}

TEST_CASE("lifting is deterministic in the seed") {
  Protomatrix p = builtin_code("isi-1/2");
  QcCode a = circulant_lift_stage2(peg_lift_stage1(p, 4, 5), 16, 5);
  QcCode b = circulant_lift_stage2(peg_lift_stage1(p, 4, 5), 16, 5);
  CHECK(qc_serialize(a) == qc_serialize(b));
}

TEST_CASE("girth analysis on handmade codes") {
  SUBCASE("equal shifts on a 2x2 block grid force 4-cycles") {
    QcCode q;
    q.graph.proto_rows = 2;
    q.graph.proto_cols = 2;
    q.graph.lift = 1;
    q.graph.edges = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    q.n2 = 4;
    q.shifts = {0, 0, 0, 0};
    GirthReport rep = girth_of(q);
    CHECK(rep.girth == 4);
    CHECK(rep.four_cycles == 4);  // one aligned quadruple times n2
  }
  SUBCASE("an offset shift breaks the 4-cycles") {
    QcCode q;
    q.graph.proto_rows = 2;
    q.graph.proto_cols = 2;
    q.graph.lift = 1;
    q.graph.edges = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    q.n2 = 4;
    q.shifts = {0, 0, 0, 1};
    GirthReport rep = girth_of(q);
    CHECK(rep.four_cycles == 0);
    CHECK(rep.girth == 16);  // the shift sum of 1 needs four block-cycle laps mod 4
  }
  SUBCASE("a tree lifts to a forest with infinite girth") {
    QcCode q;
    q.graph.proto_rows = 1;
    q.graph.proto_cols = 2;
    q.graph.lift = 1;
    q.graph.edges = {{0, 0}, {0, 1}};
    q.n2 = 5;
    q.shifts = {0, 3};
    GirthReport rep = girth_of(q);
    CHECK(rep.girth == kGirthInfinite);
    CHECK(rep.four_cycles == 0);
    CHECK(rep.six_cycles == 0);
  }
}

TEST_CASE("two-stage lift of the base code reaches girth >= 6 at n2 = 153") {
  Protomatrix p = builtin_code("isi-1/2");
  QcCode q = circulant_lift_stage2(peg_lift_stage1(p, 4, 1), 153, 1);
  GirthReport rep = girth_of(q);
  CHECK(rep.four_cycles == 0);
  CHECK(rep.girth >= 6);
}

TEST_CASE("expanded parity matrix shape and degree structure") {
  Protomatrix p = builtin_code("isi-1/2");
  QcCode q = circulant_lift_stage2(peg_lift_stage1(p, 4, 2), 10, 2);
  SparseBinaryMatrix h = to_parity_matrix(q);
  CHECK(h.rows() == 120);
  CHECK(h.cols() == 240);
  CHECK(h.nnz() == 20 * 4 * 10);
  // proto row 2 (index 1) has weight 8; its 40 expanded rows inherit it
  for (int r = 1 * 4 * 10; r < 2 * 4 * 10; ++r) CHECK(h.row(r).size() == 8);
  for (int j = 0; j < 6; ++j)
    for (int c = j * 40; c < (j + 1) * 40; ++c)
      CHECK(static_cast<int>(h.col(c).size()) == p.col_sum(j));
}

TEST_CASE("quasi-cyclicity: block-shifted codewords stay codewords") {
  Protomatrix p = builtin_code("isi-1/2");
  QcCode q = circulant_lift_stage2(peg_lift_stage1(p, 4, 9), 12, 9);
  SparseBinaryMatrix h = to_parity_matrix(q);
  Encoder enc(h);
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::uint8_t> payload(static_cast<std::size_t>(enc.k()));
    for (auto& b : payload) b = rng.bit() ? 1 : 0;
    std::vector<std::uint8_t> cw = enc.encode(payload);
    REQUIRE(h.syndrome_zero(cw));
    std::vector<std::uint8_t> shifted(cw.size());
    for (int blk = 0; blk < q.graph.n_vars(); ++blk)
      for (int t = 0; t < q.n2; ++t)
        shifted[static_cast<std::size_t>(blk * q.n2 + (t + 1) % q.n2)] =
            cw[static_cast<std::size_t>(blk * q.n2 + t)];
    CHECK(h.syndrome_zero(shifted));
  }
}

TEST_CASE("nested lifts share their prefix under index order") {
  QcCode small = circulant_lift_stage2(
      peg_lift_stage1(builtin_code("nested-2/3"), 4, 21, PegOrder::ByIndex), 8, 21,
      PegOrder::ByIndex);
  QcCode big = circulant_lift_stage2(
      peg_lift_stage1(builtin_code("nested-9/10"), 4, 21, PegOrder::ByIndex), 8, 21,
      PegOrder::ByIndex);
  REQUIRE(big.graph.edges.size() >= small.graph.edges.size());
  for (std::size_t e = 0; e < small.graph.edges.size(); ++e) {
    CHECK(big.graph.edges[e].check == small.graph.edges[e].check);
    CHECK(big.graph.edges[e].var == small.graph.edges[e].var);
    CHECK(big.shifts[e] == small.shifts[e]);
  }
}

TEST_CASE("rc members fall out of the largest lift by removal") {
  Protomatrix full = builtin_code("rc-27/41");
  QcCode q41 = circulant_lift_stage2(peg_lift_stage1(full, 4, 13), 6, 13);
  QcCode q31 = remove_rc_extension(q41, 10);
  CHECK(q31.graph.proto_rows == 4);
  CHECK(q31.graph.proto_cols == 31);
  SparseBinaryMatrix h41 = to_parity_matrix(q41);
  SparseBinaryMatrix h31 = to_parity_matrix(q31);
  // the removed member equals the leading block of the full expansion
  for (int r = 0; r < h31.rows(); ++r) {
    auto full_row = h41.row(r);
    std::vector<std::int32_t> kept;
    for (std::int32_t c : full_row)
      if (c < h31.cols()) kept.push_back(c);
    auto sub_row = h31.row(r);
    REQUIRE(kept.size() == sub_row.size());
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept[i] == sub_row[i]);
  }
  CHECK_THROWS(remove_rc_extension(q41, 20));
  // nested structure is not rc-removable
  QcCode nested = circulant_lift_stage2(peg_lift_stage1(builtin_code("nested-2/3"), 4, 1), 4, 1);
  CHECK_THROWS(remove_rc_extension(nested, 1));
}

TEST_CASE("qc text format round trip and alist export") {
  Protomatrix p = builtin_code("isi-1/2");
  QcCode q = circulant_lift_stage2(peg_lift_stage1(p, 4, 2), 7, 2);
  QcCode back = qc_parse(qc_serialize(q));
  CHECK(qc_serialize(back) == qc_serialize(q));
  CHECK_THROWS(qc_parse("3 6 4\n"));
  CHECK_THROWS(qc_parse("1 1 1 4\n0 0 9\n"));

  SparseBinaryMatrix h = to_parity_matrix(q);
  std::string alist = to_alist(h);
  std::istringstream in(alist);
  int n, m, maxc, maxr;
  in >> n >> m >> maxc >> maxr;
  CHECK(n == h.cols());
  CHECK(m == h.rows());
  CHECK(maxc == 7);  // heaviest variable class
  CHECK(maxr == 8);
}

TEST_CASE("oversized expansions are refused") {
  Protomatrix p = builtin_code("isi-1/2");
  TannerGraph g = peg_lift_stage1(p, 4, 1);
  QcCode q;
  q.graph = g;
  q.n2 = 200000;
  q.shifts.assign(g.edges.size(), 0);
  CHECK_THROWS(to_parity_matrix(q));
}
