#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isildpc/exit_surface.hpp"
#include "isildpc/jfunction.hpp"
#include "isildpc/lifting.hpp"
#include "isildpc/parallel.hpp"
#include "isildpc/pexit.hpp"
#include "isildpc/search.hpp"
#include "isildpc/simulator.hpp"
#include "isildpc/sir.hpp"
#include "isildpc/version.hpp"

namespace isildpc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a, b, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0.0)
      throw std::invalid_argument("bad grid '" + text + "', expected a:b:step");
    for (double v = a; v <= b + 1e-9; v += step) out.push_back(v);
  } else {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
  return out;
}

Rational parse_rate(const std::string& text) {
  long long p, q;
  if (std::sscanf(text.c_str(), "%lld/%lld", &p, &q) != 2)
    throw std::invalid_argument("bad rate '" + text + "', expected p/q");
  return Rational(p, q);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

Protomatrix load_code_matrix(const std::string& code) {
  if (code.size() > 3 && code.substr(code.size() - 3) == ".pm")
    return Protomatrix::parse(read_file(code));
  return builtin_code(code);
}

// every run drops a manifest next to its outputs: inputs, seeds, versions
void write_manifest(const fs::path& out_dir, const std::string& subcommand, json flags,
                    std::vector<std::string> outputs) {
  flags["version"] = kVersion;
  flags["subcommand"] = subcommand;
  flags["outputs"] = outputs;
  write_file(out_dir / (subcommand + "_manifest.json"), flags.dump(2) + "\n");
}

fs::path ensure_out(const std::string& out) {
  fs::path dir(out.empty() ? "." : out);
  fs::create_directories(dir);
  return dir;
}

// paper block-length profile: stage-2 factors per nested rate at 16k payload
int long_profile_n2(const std::string& code) {
  if (code == "isi-1/2") return 1364;
  if (code == "nested-2/3") return 683;
  if (code == "nested-3/4") return 455;
  if (code == "nested-4/5") return 342;
  if (code == "nested-5/6") return 273;
  if (code == "nested-6/7") return 227;
  if (code == "nested-7/8") return 195;
  if (code == "nested-9/10") return 153;
  if (code.rfind("rc-", 0) == 0) return 153;
  throw std::invalid_argument("no 16k-payload lifting factor is defined for '" + code + "'");
}

struct CommonFlags {
  std::string out = ".";
  std::uint64_t seed = 1;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--workers", f.workers, "worker threads (0 = all cores)")
      ->capture_default_str();
}

int cmd_capacity(const std::string& channel, const std::string& rate_text,
                 const std::string& ebno_text, long long samples, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  ChannelPoly h = ChannelPoly::parse(channel);
  Rational rate = parse_rate(rate_text);
  json flags{{"channel", channel}, {"rate", rate_text},   {"ebno", ebno_text},
             {"samples", samples}, {"seed", f.seed},      {"workers", f.workers},
             {"out", f.out}};
  if (!ebno_text.empty()) {
    std::vector<double> grid = parse_grid(ebno_text);
    std::vector<SirEstimate> estimates(grid.size());
    int workers = f.workers > 0 ? f.workers : default_workers();
    parallel_for_indexed(grid.size(), workers, [&](std::size_t i) {
      Rng rng = Rng::stream(f.seed, i);
      NoiseModel noise = NoiseModel::from_ebno_db(grid[i], rate.value());
      estimates[i] = estimate_sir(h, noise, samples, rng);
    });
    std::ostringstream csv;
    csv << "ebno_db,sir_bits,stderr\n";
    char buf[96];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid[i], estimates[i].bits,
                    estimates[i].std_error);
      csv << buf;
    }
    write_file(out / "sir_sweep.csv", csv.str());
    write_manifest(out, "capacity", flags, {"sir_sweep.csv"});
    std::cout << csv.str();
    return 0;
  }
  EbnoLimitOptions opt;
  opt.seed = f.seed;
  opt.initial_samples = std::max<long long>(samples, 10000);
  double limit = ebno_limit(h, rate, opt);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.2f\n", limit);
  std::cout << buf;
  std::ostringstream csv;
  csv << "channel,rate,ebno_limit_db\n" << channel << ',' << rate.str() << ',';
  std::snprintf(buf, sizeof buf, "%.2f\n", limit);
  csv << buf;
  write_file(out / "capacity.csv", csv.str());
  write_manifest(out, "capacity", flags, {"capacity.csv"});
  return 0;
}

int cmd_exit_table(const std::string& channel, const std::string& ebno_text,
                   const std::string& ia_text, long long samples, double rate_ref,
                   const std::string& name, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  ChannelPoly h = ChannelPoly::parse(channel);
  ExitMeasureOptions opt;
  opt.n_symbols = samples;
  opt.seed = f.seed;
  opt.workers = f.workers;
  opt.rate_ref = rate_ref;
  ExitSurface s = measure_detector_exit(h, parse_grid(ebno_text), parse_grid(ia_text), opt);
  save_surface(s, (out / (name + ".csv")).string());
  json flags{{"channel", channel}, {"ebno", ebno_text},   {"ia", ia_text},
             {"samples", samples}, {"rate_ref", rate_ref}, {"seed", f.seed},
             {"workers", f.workers}, {"out", f.out},        {"name", name}};
  write_manifest(out, "exit-table", flags, {name + ".csv", name + ".csv.json"});
  std::cout << "surface " << s.ebno_grid().size() << "x" << s.ia_grid().size() << " cells -> "
            << (out / (name + ".csv")).string() << "\n";
  return 0;
}

int cmd_threshold(const std::string& code, const std::string& channel,
                  const std::string& surface_path, double lo, double hi, long long samples,
                  const CommonFlags& f) {
  auto out = ensure_out(f.out);
  Protomatrix p = load_code_matrix(code);
  const double rate = p.rate().value();
  ExitSurface surface = [&] {
    if (!surface_path.empty()) return load_surface(surface_path);
    // measure an ad-hoc surface just covering the bracket
    ChannelPoly h = ChannelPoly::parse(channel);
    const double axis_lo = lo + 10.0 * std::log10(rate) - 0.3;
    const double axis_hi = hi + 10.0 * std::log10(rate) + 0.3;
    std::vector<double> ebno, ia;
    for (double e = axis_lo; e <= axis_hi + 1e-9; e += 0.25) ebno.push_back(e);
    for (int i = 0; i <= 20; ++i) ia.push_back(i / 20.0);
    ExitMeasureOptions opt;
    opt.n_symbols = samples;
    opt.seed = f.seed;
    opt.workers = f.workers;
    return measure_detector_exit(h, ebno, ia, opt);
  }();
  double th = threshold_search(p, surface, lo, hi);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f\n", th);
  std::cout << buf;
  std::ostringstream csv;
  csv << "code,channel,threshold_db\n" << code << ',' << channel << ',';
  csv << buf;
  write_file(out / "threshold.csv", csv.str());
  json flags{{"code", code}, {"channel", channel}, {"surface", surface_path},
             {"lo", lo},     {"hi", hi},           {"samples", samples},
             {"seed", f.seed}, {"workers", f.workers}, {"out", f.out}};
  write_manifest(out, "threshold", flags, {"threshold.csv"});
  return 0;
}

int cmd_search_base(const std::string& surface_path, const std::string& coarse_path,
                    double keep, long long cap, double lo, double hi, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  ExitSurface surface = load_surface(surface_path);
  SearchSpec spec;
  spec.seed = f.seed;
  spec.workers = f.workers;
  spec.keep_fraction = keep;
  spec.candidate_cap = cap;
  spec.bracket_lo_db = lo;
  spec.bracket_hi_db = hi;
  std::optional<ExitSurface> coarse;
  if (!coarse_path.empty()) coarse = load_surface(coarse_path);
  BaseSearchReport report =
      search_base_rate_half(spec, surface, coarse ? &*coarse : nullptr);
  write_file(out / "search_base.json", report.to_json() + "\n");
  write_file(out / "search_base_best.pm", report.best().serialize());
  json flags{{"surface", surface_path}, {"coarse_surface", coarse_path},
             {"keep", keep},            {"cap", cap},
             {"lo", lo},                {"hi", hi},
             {"seed", f.seed},          {"workers", f.workers},
             {"out", f.out}};
  write_manifest(out, "search-base", flags, {"search_base.json", "search_base_best.pm"});
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f\n", report.best_threshold_db());
  std::cout << buf;
  return 0;
}

int cmd_extend_nested(const std::string& code, const std::string& surface_path, int cols,
                      double lo, double hi, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  ExitSurface surface = load_surface(surface_path);
  SearchSpec spec;
  spec.seed = f.seed;
  spec.workers = f.workers;
  spec.bracket_lo_db = lo;
  spec.bracket_hi_db = hi;
  NestedStepReport report = search_nested_step(load_code_matrix(code), surface, cols, spec);
  write_file(out / "extend_nested.json", report.to_json() + "\n");
  write_file(out / "extend_nested_best.pm", report.child.serialize());
  json flags{{"code", code}, {"surface", surface_path}, {"cols", cols},   {"lo", lo},
             {"hi", hi},     {"seed", f.seed},          {"workers", f.workers}, {"out", f.out}};
  write_manifest(out, "extend-nested", flags, {"extend_nested.json", "extend_nested_best.pm"});
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f\n", report.threshold_db);
  std::cout << buf;
  return 0;
}

int cmd_extend_rc(const std::string& code, const std::string& surface_path, long long budget,
                  double lo, double hi, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  ExitSurface surface = load_surface(surface_path);
  SearchSpec spec;
  spec.seed = f.seed;
  spec.workers = f.workers;
  spec.bracket_lo_db = lo;
  spec.bracket_hi_db = hi;
  RcStepReport report = search_rc_step(load_code_matrix(code), surface, budget, spec);
  write_file(out / "extend_rc.json", report.to_json() + "\n");
  write_file(out / "extend_rc_best.pm", report.child.serialize());
  json flags{{"code", code},   {"surface", surface_path}, {"budget", budget}, {"lo", lo},
             {"hi", hi},       {"seed", f.seed},          {"workers", f.workers},
             {"out", f.out}};
  write_manifest(out, "extend-rc", flags, {"extend_rc.json", "extend_rc_best.pm"});
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f\n", report.threshold_db);
  std::cout << buf;
  return 0;
}

int cmd_lift(const std::string& code, int n1, int n2, const std::string& order_text,
             const CommonFlags& f) {
  auto out = ensure_out(f.out);
  PegOrder order = order_text == "index" ? PegOrder::ByIndex : PegOrder::ByDegree;
  if (order_text != "index" && order_text != "degree")
    throw std::invalid_argument("lift: --order must be 'degree' or 'index'");
  Protomatrix p = load_code_matrix(code);
  TannerGraph g = peg_lift_stage1(p, n1, f.seed, order);
  QcCode q = circulant_lift_stage2(g, n2, f.seed, order);
  std::string base = code;
  for (auto& ch : base)
    if (ch == '/' || ch == '.') ch = '_';
  write_file(out / (base + ".qc"), qc_serialize(q));
  write_file(out / (base + ".alist"), to_alist(to_parity_matrix(q)));
  json flags{{"code", code}, {"n1", n1},       {"n2", n2},
             {"order", order_text}, {"seed", f.seed}, {"workers", f.workers},
             {"out", f.out}};
  write_manifest(out, "lift", flags, {base + ".qc", base + ".alist"});
  std::cout << "n=" << q.block_length() << " k=" << q.payload_bits() << " edges="
            << q.graph.edges.size() * static_cast<long long>(n2) << "\n";
  return 0;
}

int cmd_girth(const std::string& qc_path, const CommonFlags& f) {
  auto out = ensure_out(f.out);
  QcCode q = qc_parse(read_file(qc_path));
  GirthReport rep = girth_of(q);
  std::ostringstream line;
  line << "girth=";
  if (rep.girth == kGirthInfinite)
    line << "inf";
  else
    line << rep.girth;
  line << " four_cycles=" << rep.four_cycles << " six_cycles=" << rep.six_cycles << "\n";
  std::cout << line.str();
  std::ostringstream csv;
  csv << "girth,four_cycles,six_cycles\n"
      << (rep.girth == kGirthInfinite ? -1 : rep.girth) << ',' << rep.four_cycles << ','
      << rep.six_cycles << '\n';
  write_file(out / "girth.csv", csv.str());
  json flags{{"qc", qc_path}, {"seed", f.seed}, {"workers", f.workers}, {"out", f.out}};
  write_manifest(out, "girth", flags, {"girth.csv"});
  return 0;
}

int cmd_simulate(const std::string& plan_path, const std::string& code,
                 const std::string& channel, const std::string& ebno_text, int n1, int n2,
                 long long min_errors, long long max_frames, bool long_profile,
                 const CommonFlags& f) {
  auto out = ensure_out(f.out);
  SimPlan plan;
  if (!plan_path.empty()) {
    plan = plan_from_json(read_file(plan_path));
  } else {
    plan.code = code;
    plan.channel = channel;
    plan.ebno_db = parse_grid(ebno_text);
    plan.n1 = n1;
    plan.n2 = n2;
    plan.seed = f.seed;
    plan.lift_seed = f.seed;
    plan.stop = {min_errors, max_frames};
  }
  if (long_profile) {
    plan.n2 = long_profile_n2(plan.code);
    plan.stop = {100, 100000000};
    if (plan.code.rfind("rc-", 0) == 0 && plan.code != "rc-27/41") {
      // rc members come from the largest graph by removal
      Protomatrix full = builtin_code("rc-27/41");
      Protomatrix member = builtin_code(plan.code);
      TannerGraph g = peg_lift_stage1(full, plan.n1, plan.lift_seed);
      QcCode q = remove_rc_extension(circulant_lift_stage2(g, plan.n2, plan.lift_seed),
                                     full.rows() - member.rows());
      write_file(out / "rc_member.qc", qc_serialize(q));
      plan.code = (out / "rc_member.qc").string();
    }
  }
  plan.workers = f.workers;
  SimResult result = run_sweep(plan);
  write_file(out / "results.csv", sim_result_csv(result));
  write_file(out / "plan.json", plan_to_json(plan) + "\n");
  json flags{{"plan", plan_path},   {"code", plan.code}, {"channel", plan.channel},
             {"ebno", ebno_text},   {"n1", plan.n1},     {"n2", plan.n2},
             {"min_errors", plan.stop.min_frame_errors},
             {"max_frames", plan.stop.max_frames},       {"long", long_profile},
             {"seed", plan.seed},   {"workers", f.workers}, {"out", f.out}};
  write_manifest(out, "simulate", flags, {"results.csv", "plan.json"});
  std::cout << sim_result_csv(result);
  for (const auto& flag : result.flags) std::cerr << "note: " << flag << "\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"protograph LDPC design and evaluation toolkit for ISI channels"};
  app.require_subcommand(1);

  CommonFlags common;

  // capacity
  auto* capacity = app.add_subcommand("capacity", "i.u.d. information rate / Eb/N0 limit");
  std::string cap_channel, cap_rate = "1/2", cap_ebno;
  long long cap_samples = 200000;
  capacity->add_option("--channel", cap_channel, "dicode | epr4 | fir:c0,c1,...")->required();
  capacity->add_option("--rate", cap_rate, "code rate p/q")->capture_default_str();
  capacity->add_option("--ebno", cap_ebno, "sweep grid a:b:step or comma list");
  capacity->add_option("--samples", cap_samples, "samples per estimate")->capture_default_str();
  add_common(capacity, common);

  // exit-table
  auto* exit_table = app.add_subcommand("exit-table", "measure a detector EXIT surface");
  std::string et_channel, et_ebno, et_ia = "0:1:0.05", et_name = "surface";
  long long et_samples = 200000;
  double et_rate_ref = 1.0;
  exit_table->add_option("--channel", et_channel)->required();
  exit_table->add_option("--ebno", et_ebno, "Eb/N0 grid at the reference rate")->required();
  exit_table->add_option("--ia", et_ia, "a-priori MI grid")->capture_default_str();
  exit_table->add_option("--samples", et_samples, "symbols per cell")->capture_default_str();
  exit_table->add_option("--rate-ref", et_rate_ref, "rate the Eb/N0 axis refers to")
      ->capture_default_str();
  exit_table->add_option("--name", et_name, "output base name")->capture_default_str();
  add_common(exit_table, common);

  // threshold
  auto* threshold = app.add_subcommand("threshold", "PEXIT decoding threshold of a protograph");
  std::string th_code, th_channel = "dicode", th_surface;
  double th_lo = 0.0, th_hi = 6.0;
  long long th_samples = 200000;
  threshold->add_option("--code", th_code, "builtin name or .pm file")->required();
  threshold->add_option("--channel", th_channel)->capture_default_str();
  threshold->add_option("--surface", th_surface, "EXIT surface CSV (measured if omitted)");
  threshold->add_option("--lo", th_lo, "bracket low, dB")->capture_default_str();
  threshold->add_option("--hi", th_hi, "bracket high, dB")->capture_default_str();
  threshold->add_option("--samples", th_samples, "symbols per cell for ad-hoc surfaces")
      ->capture_default_str();
  add_common(threshold, common);

  // search-base
  auto* search_base = app.add_subcommand("search-base", "rate-1/2 protograph search");
  std::string sb_surface, sb_coarse;
  double sb_keep = 0.05, sb_lo = 0.0, sb_hi = 6.0;
  long long sb_cap = 0;
  search_base->add_option("--surface", sb_surface, "EXIT surface CSV")->required();
  search_base->add_option("--coarse-surface", sb_coarse, "cheaper surface for the prefilter");
  search_base->add_option("--keep", sb_keep, "fraction fully evaluated")->capture_default_str();
  search_base->add_option("--cap", sb_cap, "candidate cap (0 = all)")->capture_default_str();
  search_base->add_option("--lo", sb_lo)->capture_default_str();
  search_base->add_option("--hi", sb_hi)->capture_default_str();
  add_common(search_base, common);

  // extend-nested
  auto* extend_nested = app.add_subcommand("extend-nested", "one nested lengthening step");
  std::string en_code, en_surface;
  int en_cols = 3;
  double en_lo = 0.0, en_hi = 6.0;
  extend_nested->add_option("--code", en_code, "parent protograph")->required();
  extend_nested->add_option("--surface", en_surface)->required();
  extend_nested->add_option("--cols", en_cols, "new variable nodes")->capture_default_str();
  extend_nested->add_option("--lo", en_lo)->capture_default_str();
  extend_nested->add_option("--hi", en_hi)->capture_default_str();
  add_common(extend_nested, common);

  // extend-rc
  auto* extend_rc = app.add_subcommand("extend-rc", "one rate-compatible extension step");
  std::string er_code, er_surface;
  long long er_budget = 300;
  double er_lo = 0.0, er_hi = 6.0;
  extend_rc->add_option("--code", er_code, "parent protograph")->required();
  extend_rc->add_option("--surface", er_surface)->required();
  extend_rc->add_option("--budget", er_budget, "candidate evaluations")->capture_default_str();
  extend_rc->add_option("--lo", er_lo)->capture_default_str();
  extend_rc->add_option("--hi", er_hi)->capture_default_str();
  add_common(extend_rc, common);

  // lift
  auto* lift = app.add_subcommand("lift", "two-stage quasi-cyclic lifting");
  std::string l_code, l_order = "degree";
  int l_n1 = 4, l_n2 = 0;
  lift->add_option("--code", l_code)->required();
  lift->add_option("--n1", l_n1, "stage-1 factor")->capture_default_str();
  lift->add_option("--n2", l_n2, "circulant size")->required();
  lift->add_option("--order", l_order, "PEG order: degree | index")->capture_default_str();
  add_common(lift, common);

  // girth
  auto* girth = app.add_subcommand("girth", "cycle analysis of a lifted code");
  std::string g_qc;
  girth->add_option("--qc", g_qc, "lifted code file")->required();
  add_common(girth, common);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "turbo-equalized FER/BER measurement");
  std::string s_plan, s_code = "isi-1/2", s_channel = "dicode", s_ebno;
  int s_n1 = 4, s_n2 = 100;
  long long s_errors = 100, s_frames = 1000000;
  bool s_long = false;
  simulate->add_option("--plan", s_plan, "plan JSON (overrides the other flags)");
  simulate->add_option("--code", s_code)->capture_default_str();
  simulate->add_option("--channel", s_channel)->capture_default_str();
  simulate->add_option("--ebno", s_ebno, "grid a:b:step or comma list");
  simulate->add_option("--n1", s_n1)->capture_default_str();
  simulate->add_option("--n2", s_n2)->capture_default_str();
  simulate->add_option("--errors", s_errors, "min frame errors per point")->capture_default_str();
  simulate->add_option("--frames", s_frames, "max frames per point")->capture_default_str();
  simulate->add_flag("--long", s_long, "16k-payload profile from the block-length table");
  add_common(simulate, common);

  std::vector<const char*> argv;
  argv.push_back("isildpc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (capacity->parsed())
      return cmd_capacity(cap_channel, cap_rate, cap_ebno, cap_samples, common);
    if (exit_table->parsed())
      return cmd_exit_table(et_channel, et_ebno, et_ia, et_samples, et_rate_ref, et_name, common);
    if (threshold->parsed())
      return cmd_threshold(th_code, th_channel, th_surface, th_lo, th_hi, th_samples, common);
    if (search_base->parsed())
      return cmd_search_base(sb_surface, sb_coarse, sb_keep, sb_cap, sb_lo, sb_hi, common);
    if (extend_nested->parsed())
      return cmd_extend_nested(en_code, en_surface, en_cols, en_lo, en_hi, common);
    if (extend_rc->parsed())
      return cmd_extend_rc(er_code, er_surface, er_budget, er_lo, er_hi, common);
    if (lift->parsed()) return cmd_lift(l_code, l_n1, l_n2, l_order, common);
    if (girth->parsed()) return cmd_girth(g_qc, common);
    if (simulate->parsed())
      return cmd_simulate(s_plan, s_code, s_channel, s_ebno, s_n1, s_n2, s_errors, s_frames,
                          s_long, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace isildpc
