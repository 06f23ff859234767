// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy Monte-Carlo settings match the library defaults; the whole
// run is sized for a desktop machine.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "cli.hpp"
#include "isildpc/encoder.hpp"
#include "isildpc/exit_surface.hpp"
#include "isildpc/lifting.hpp"
#include "isildpc/parallel.hpp"
#include "isildpc/pexit.hpp"
#include "isildpc/search.hpp"
#include "isildpc/simulator.hpp"
#include "isildpc/sir.hpp"
#include "oracles.hpp"

using namespace isildpc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

struct Criterion {
  std::string id;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    notes.push_back(std::string(cond ? "  ok   " : "  FAIL ") + what);
    ok = ok && cond;
  }
  void info(const std::string& what) { notes.push_back("  info " + what); }
  void finish() {
    for (const auto& n : notes) std::cout << n << "\n";
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << "\n" << std::flush;
    if (!ok) ++g_failures;
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop the wall-time column before comparing simulator CSVs
std::string strip_seconds(const std::string& s) {
  std::string out;
  for (std::size_t pos = 0; pos < s.size();) {
    std::size_t eol = s.find('\n', pos);
    if (eol == std::string::npos) break;
    std::size_t last_comma = s.rfind(',', eol);
    out += s.substr(pos, last_comma - pos);
    out += '\n';
    pos = eol + 1;
  }
  return out;
}

ExitSurface measure(const ChannelPoly& h, std::uint64_t seed) {
  std::vector<double> ebno, ia;
  for (double e = -3.0; e <= 5.25 + 1e-9; e += 0.25) ebno.push_back(e);
  for (int i = 0; i <= 20; ++i) ia.push_back(i / 20.0);
  ExitMeasureOptions opt;
  opt.n_symbols = 200000;
  opt.seed = seed;
  return measure_detector_exit(h, ebno, ia, opt);
}

double th(const Protomatrix& p, const ExitSurface& s, double expect_db) {
  return threshold_search(p, s, expect_db - 0.8, expect_db + 0.8);
}

}  // namespace

int main() {
  const auto t_start = Clock::now();
  std::cout << "acceptance suite, workers=" << default_workers() << "\n";

  std::cout << "measuring detector EXIT surfaces (dicode, epr4)...\n" << std::flush;
  const auto t_surface = Clock::now();
  ExitSurface dicode_surface = measure(ChannelPoly::dicode(), 20240);
  ExitSurface epr4_surface = measure(ChannelPoly::epr4(), 20241);
  std::cout << "surfaces ready in " << fmt(elapsed_s(t_surface)) << " s\n" << std::flush;

  double th_base_dicode = 0.0;

  {  // A1: Table-regression thresholds on the design channel
    Criterion c{"A1 (dicode thresholds: 1.3 / 4.2 / 2.1 +- 0.15)"};
    try {
      const auto t0 = Clock::now();
      th_base_dicode = th(builtin_code("isi-1/2"), dicode_surface, 1.3);
      double t910 = th(builtin_code("nested-9/10"), dicode_surface, 4.2);
      double t2741 = th(builtin_code("rc-27/41"), dicode_surface, 2.1);
      c.info("isi-1/2 " + fmt(th_base_dicode) + ", nested-9/10 " + fmt(t910) + ", rc-27/41 " +
             fmt(t2741) + " dB");
      c.expect(std::fabs(th_base_dicode - 1.3) <= 0.15, "isi-1/2 within 1.3 +- 0.15");
      c.expect(std::fabs(t910 - 4.2) <= 0.15, "nested-9/10 within 4.2 +- 0.15");
      c.expect(std::fabs(t2741 - 2.1) <= 0.15, "rc-27/41 within 2.1 +- 0.15");
      double budget = elapsed_s(t_surface);
      c.info("surfaces + thresholds took " + fmt(budget) + " s");
      c.expect(budget <= 1800.0, "within the 30 min budget");
      c.info("threshold search time " + fmt(elapsed_s(t0)) + " s (one shared surface)");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // A2: transfer channel
    Criterion c{"A2 (epr4 thresholds: 1.7 / 4.7 / 2.5 +- 0.15)"};
    try {
      double t12 = th(builtin_code("isi-1/2"), epr4_surface, 1.7);
      double t910 = th(builtin_code("nested-9/10"), epr4_surface, 4.7);
      double t2741 = th(builtin_code("rc-27/41"), epr4_surface, 2.5);
      c.info("isi-1/2 " + fmt(t12) + ", nested-9/10 " + fmt(t910) + ", rc-27/41 " + fmt(t2741) +
             " dB");
      c.expect(std::fabs(t12 - 1.7) <= 0.15, "isi-1/2 within 1.7 +- 0.15");
      c.expect(std::fabs(t910 - 4.7) <= 0.15, "nested-9/10 within 4.7 +- 0.15");
      c.expect(std::fabs(t2741 - 2.5) <= 0.15, "rc-27/41 within 2.5 +- 0.15");
      c.info("low-rate epr4 entries run ~0.2 dB above the reference under the");
      c.info("Gaussian detector-coupling model; see the project notes for the");
      c.info("model variants that were ruled out");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // nested-family ordering invariant rides on the same surface
    Criterion c{"INV (nested thresholds increase with rate, dicode)"};
    try {
      const double table[9] = {1.3, 2.2, 2.7, 3.1, 3.3, 3.6, 3.8, 4.0, 4.2};
      std::vector<double> measured;
      measured.push_back(th_base_dicode);
      for (int n = 2; n <= 9; ++n) {
        Protomatrix p = builtin_code("nested-" + std::to_string(n) + "/" + std::to_string(n + 1));
        measured.push_back(th(p, dicode_surface, table[n - 1]));
      }
      std::string line = "thresholds:";
      for (double v : measured) line += " " + fmt(v);
      c.info(line);
      std::string ref = "reference: ";
      for (double v : table) ref += " " + fmt(v);
      c.info(ref);
      for (int i = 1; i < 9; ++i)
        c.expect(measured[static_cast<std::size_t>(i)] >=
                     measured[static_cast<std::size_t>(i - 1)] - 0.15,
                 "threshold increases with rate at step " + std::to_string(i));
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // A3: capacity gaps
    Criterion c{"A3 (i.u.d. limits: dicode 0.8, epr4 4.3, awgn 0.19)"};
    try {
      EbnoLimitOptions opt;
      opt.seed = 31001;
      double dicode_half = ebno_limit(ChannelPoly::dicode(), Rational(1, 2), opt);
      opt.seed = 31002;
      double epr4_910 = ebno_limit(ChannelPoly::epr4(), Rational(9, 10), opt);
      opt.seed = 31003;
      double awgn_half = ebno_limit(ChannelPoly::fir({1.0}), Rational(1, 2), opt);
      double oracle_half = oracle::biawgn_ebno_limit(0.5);
      c.info("dicode@1/2 " + fmt(dicode_half) + ", epr4@9/10 " + fmt(epr4_910) + ", awgn@1/2 " +
             fmt(awgn_half) + " (oracle " + fmt(oracle_half) + ") dB");
      c.expect(std::fabs(dicode_half - 0.8) <= 0.15, "dicode rate-1/2 limit 0.8 +- 0.15");
      c.expect(std::fabs(epr4_910 - 4.3) <= 0.2, "epr4 rate-9/10 limit 4.3 +- 0.2");
      c.expect(std::fabs(awgn_half - 0.19) <= 0.1, "memoryless limit 0.19 +- 0.1");
      c.expect(std::fabs(awgn_half - oracle_half) <= 0.1, "matches the analytic oracle");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  long long nested_candidates = 0;
  {  // A4 + A5: search counts and quality
    Criterion c4{"A4 (search spaces: 43740 base, 729 nested)"};
    Criterion c5{"A5 (search quality: base <= 1.45 dB, nested step <= 2.35 dB)"};
    try {
      SearchSpec spec;
      spec.seed = 424242;
      auto all = enumerate_base_candidates(spec);
      c4.expect(static_cast<long long>(all.size()) == 43740,
                "base feasible count = " + std::to_string(all.size()));
      std::set<std::string> seen;
      for (const auto& p : all) seen.insert(p.serialize());
      c4.expect(seen.count(builtin_code("isi-1/2").serialize()) == 1,
                "published base matrix is feasible");

      const auto t0 = Clock::now();
      spec.bracket_lo_db = 0.3;
      spec.bracket_hi_db = 4.0;
      BaseSearchReport report = search_base_rate_half(spec, dicode_surface);
      c5.info("best base threshold " + fmt(report.best_threshold_db()) + " dB after " +
              std::to_string(report.evaluated_coarse) + " coarse + " +
              std::to_string(report.evaluated_fine) + " fine evaluations");
      c5.expect(report.best_threshold_db() <= 1.45, "base search best <= 1.45 dB");
      c5.expect(report.audit_ok, "prefilter audit within 0.1 dB (" +
                                     std::to_string(report.audit_checked) + " samples)");

      NestedStepReport step = search_nested_step(report.best(), dicode_surface, 3, spec);
      nested_candidates = step.candidates;
      c4.expect(step.candidates == 729,
                "nested joint candidates = " + std::to_string(step.candidates));
      c5.info("nested-step threshold " + fmt(step.threshold_db) + " dB");
      c5.expect(step.threshold_db <= 2.35, "rate-2/3 step <= 2.35 dB");

      SearchSpec rc_spec = spec;
      rc_spec.bracket_lo_db = 3.5;
      rc_spec.bracket_hi_db = 5.2;
      RcStepReport rc = search_rc_step(builtin_code("nested-9/10"), epr4_surface, 60, rc_spec);
      c5.info("rc step found a 27/31 code at " + fmt(rc.threshold_db) + " dB over epr4");
      c5.expect(rc.child.rate() == Rational(27, 31), "rc step lands at rate 27/31");
      c5.expect(rc.threshold_db <= 4.45, "found 27/31 epr4 threshold <= 4.45 dB");
      double search_time = elapsed_s(t0);
      c5.info("search time " + fmt(search_time) + " s");
      c5.expect(search_time <= 14400.0, "prefilter profile within 4 h");
    } catch (const std::exception& e) {
      c4.expect(false, std::string("exception: ") + e.what());
      c5.expect(false, "same exception");
    }
    c4.finish();
    c5.finish();
  }

  {  // A6: lifting
    Criterion c{"A6 (two-stage lifting: structure, girth, block lengths)"};
    try {
      Protomatrix base = builtin_code("isi-1/2");
      TannerGraph g1 = peg_lift_stage1(base, 4, 11);
      std::set<std::pair<int, int>> pairs;
      bool simple = true;
      for (const auto& e : g1.edges) simple = pairs.insert({e.check, e.var}).second && simple;
      c.expect(simple, "stage 1 has no parallel edges");

      QcCode q153 = circulant_lift_stage2(g1, 153, 11);
      GirthReport rep = girth_of(q153);
      c.info("girth at n2=153: " + std::to_string(rep.girth) + ", 4-cycles " +
             std::to_string(rep.four_cycles) + ", 6-cycles " + std::to_string(rep.six_cycles));
      c.expect(rep.girth >= 6, "girth >= 6 after stage 2");

      QcCode q1364 = circulant_lift_stage2(g1, 1364, 11);
      c.expect(q1364.block_length() == 32736, "rate-1/2 n = 32736 at 4x1364");
      c.expect(q1364.payload_bits() == 16368, "rate-1/2 k = 16368");
      QcCode q910 = circulant_lift_stage2(peg_lift_stage1(builtin_code("nested-9/10"), 4, 11),
                                          153, 11);
      c.expect(q910.block_length() == 18360, "rate-9/10 n = 18360 at 4x153");
      c.expect(q910.payload_bits() == 16524, "rate-9/10 k = 16524");

      // nesting survives lifting under a shared prefix order
      QcCode small = circulant_lift_stage2(
          peg_lift_stage1(builtin_code("nested-2/3"), 4, 11, PegOrder::ByIndex), 153, 11,
          PegOrder::ByIndex);
      QcCode big = circulant_lift_stage2(
          peg_lift_stage1(builtin_code("nested-9/10"), 4, 11, PegOrder::ByIndex), 153, 11,
          PegOrder::ByIndex);
      bool nested_ok = big.graph.edges.size() >= small.graph.edges.size();
      for (std::size_t e = 0; nested_ok && e < small.graph.edges.size(); ++e)
        nested_ok = big.graph.edges[e].check == small.graph.edges[e].check &&
                    big.graph.edges[e].var == small.graph.edges[e].var &&
                    big.shifts[e] == small.shifts[e];
      c.expect(nested_ok, "rate-2/3 lift is a prefix substructure of the rate-9/10 lift");

      // rc members come out of the largest lift by removal
      QcCode q2741 = circulant_lift_stage2(peg_lift_stage1(builtin_code("rc-27/41"), 4, 11), 153,
                                           11);
      QcCode q2731 = remove_rc_extension(q2741, 10);
      c.expect(q2731.graph.proto_rows == 4 && q2731.graph.proto_cols == 31,
               "removal yields the 27/31 member");
      c.expect(q2731.payload_bits() == q2741.payload_bits(),
               "payload is preserved across the rc family");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // A7: oracle equivalence
    Criterion c{"A7 (oracles: BCJR enumeration, ML agreement, syndrome)"};
    try {
      Rng rng(71000);
      double worst = 0.0;
      for (const auto& h : {ChannelPoly::dicode(), ChannelPoly::epr4()}) {
        for (int trial = 0; trial < 4; ++trial) {
          const int n = 10;
          std::vector<std::uint8_t> bits(n);
          for (auto& b : bits) b = rng.bit() ? 1 : 0;
          NoiseModel noise = NoiseModel::with_sigma(0.8);
          auto y = transmit(bits, h, noise, rng);
          std::vector<double> prior(n);
          for (auto& p : prior) p = rng.gaussian();
          auto ext = bcjr_detect(y, prior, h, noise, 1e9);
          auto post = oracle::brute_force_posteriors(y, prior, h.taps, 0.8);
          for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::fabs(ext[static_cast<std::size_t>(k)] +
                                              prior[static_cast<std::size_t>(k)] -
                                              post[static_cast<std::size_t>(k)]));
        }
      }
      c.info("worst BCJR-vs-enumeration deviation " + std::to_string(worst));
      c.expect(worst < 1e-8, "BCJR matches exhaustive paths within 1e-8");

      const std::vector<std::vector<int>> ham = {{0, 2, 4, 6}, {1, 2, 5, 6}, {3, 4, 5, 6}};
      std::vector<std::pair<int, int>> entries;
      for (int r = 0; r < 3; ++r)
        for (int col : ham[static_cast<std::size_t>(r)]) entries.emplace_back(r, col);
      SparseBinaryMatrix hham(3, 7, std::move(entries));
      auto words = oracle::all_codewords(ham, 7);
      const double sigma = std::sqrt(1.0 / (2.0 * (4.0 / 7.0) * std::pow(10.0, 0.4)));
      DecodeConfig cfg;
      cfg.bp_iters = 50;
      int agree = 0;
      const int frames = 4000;
      for (int f = 0; f < frames; ++f) {
        const auto& cw = words[rng.below(words.size())];
        std::vector<double> y(7), llr(7);
        for (int k = 0; k < 7; ++k) {
          double x = cw[static_cast<std::size_t>(k)] ? -1.0 : 1.0;
          y[static_cast<std::size_t>(k)] = x + sigma * rng.gaussian();
          llr[static_cast<std::size_t>(k)] = 2.0 * y[static_cast<std::size_t>(k)] / (sigma * sigma);
        }
        agree += bp_decode(hham, llr, cfg).bits == oracle::ml_decode(y, words);
      }
      double ml_rate = static_cast<double>(agree) / frames;
      c.info("BP/ML agreement " + fmt(100.0 * ml_rate) + " %");
      c.expect(ml_rate >= 0.95, "BP matches ML on >= 95% of frames at 4 dB");

      QcCode desk = circulant_lift_stage2(peg_lift_stage1(builtin_code("isi-1/2"), 4, 7), 100, 7);
      SparseBinaryMatrix hd = to_parity_matrix(desk);
      Encoder enc(hd);
      bool all_zero = true;
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> payload(static_cast<std::size_t>(enc.k()));
        for (auto& b : payload) b = rng.bit() ? 1 : 0;
        all_zero = all_zero && hd.syndrome_zero(enc.encode(payload));
      }
      c.expect(all_zero, "encoder syndrome is always zero (100 random payloads, n=2400)");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // A8: desk-scale waterfall
    Criterion c{"A8 (desk waterfall: FER <= 1e-2 at threshold + 1.5 dB)"};
    try {
      SimPlan plan;
      plan.code = "isi-1/2";
      plan.n1 = 4;
      plan.n2 = 100;
      plan.lift_seed = 7;
      plan.channel = "dicode";
      plan.seed = 808;
      plan.stop = {50, 100000};
      plan.receiver = DecodeConfig{};
      const double point = th_base_dicode + 1.5;
      plan.ebno_db = {point};
      const ChannelPoly channel = ChannelPoly::dicode();
      const Receiver receiver(load_plan_code(plan), channel);
      SimPointResult r = run_point(receiver, channel, plan, point);
      c.info("n=2400 at " + fmt(point) + " dB: " + std::to_string(r.frame_errors) + " errors in " +
             std::to_string(r.frames) + " frames, FER " + std::to_string(r.fer));
      c.expect(r.fer <= 1e-2, "FER <= 1e-2 within 1e5 frames");
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  {  // A9: worker-count determinism through the CLI
    Criterion c{"A9 (bit-identical outputs across 1 and 8 workers)"};
    try {
      fs::path tmp = fs::temp_directory_path() / "isildpc_acceptance_a9";
      fs::remove_all(tmp);
      fs::create_directories(tmp);
      auto dir = [&](const std::string& name) {
        fs::create_directories(tmp / name);
        return (tmp / name).string();
      };
      bool ok = true;
      ok &= run_cli({"simulate", "--code", "isi-1/2", "--channel", "dicode", "--ebno", "2.5,3.5",
                     "--n2", "16", "--errors", "8", "--frames", "256", "--seed", "99",
                     "--workers", "1", "--out", dir("sim1")}) == 0;
      ok &= run_cli({"simulate", "--code", "isi-1/2", "--channel", "dicode", "--ebno", "2.5,3.5",
                     "--n2", "16", "--errors", "8", "--frames", "256", "--seed", "99",
                     "--workers", "8", "--out", dir("sim8")}) == 0;
      c.expect(ok, "simulate runs succeed");
      c.expect(strip_seconds(slurp(tmp / "sim1/results.csv")) ==
                   strip_seconds(slurp(tmp / "sim8/results.csv")),
               "simulate tallies identical (1 vs 8 workers)");

      ok = run_cli({"exit-table", "--channel", "dicode", "--ebno", "-2:0:1", "--ia", "0:1:0.25",
                    "--samples", "100000", "--seed", "77", "--workers", "1", "--out",
                    dir("et1")}) == 0;
      ok &= run_cli({"exit-table", "--channel", "dicode", "--ebno", "-2:0:1", "--ia", "0:1:0.25",
                     "--samples", "100000", "--seed", "77", "--workers", "8", "--out",
                     dir("et8")}) == 0;
      c.expect(ok, "exit-table runs succeed");
      c.expect(slurp(tmp / "et1/surface.csv") == slurp(tmp / "et8/surface.csv"),
               "surface CSV byte-identical (1 vs 8 workers)");

      ok = run_cli({"capacity", "--channel", "dicode", "--rate", "1/2", "--ebno", "0:1:0.5",
                    "--samples", "100000", "--seed", "55", "--workers", "1", "--out",
                    dir("cap1")}) == 0;
      ok &= run_cli({"capacity", "--channel", "dicode", "--rate", "1/2", "--ebno", "0:1:0.5",
                     "--samples", "100000", "--seed", "55", "--workers", "8", "--out",
                     dir("cap8")}) == 0;
      c.expect(ok, "capacity runs succeed");
      c.expect(slurp(tmp / "cap1/sir_sweep.csv") == slurp(tmp / "cap8/sir_sweep.csv"),
               "SIR sweep CSV byte-identical (1 vs 8 workers)");
      fs::remove_all(tmp);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    c.finish();
  }

  std::cout << "total " << fmt(elapsed_s(t_start)) << " s, " << g_failures
            << " criterion failure(s)\n";
  (void)nested_candidates;
  return g_failures == 0 ? 0 : 1;
}
