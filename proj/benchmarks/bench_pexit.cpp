#include <benchmark/benchmark.h>

#include <cmath>

#include "isildpc/jfunction.hpp"
#include "isildpc/pexit.hpp"

using namespace isildpc;

namespace {

ExitSurface bench_surface() {
  std::vector<double> ebno, ia, table;
  for (double e = -6.0; e <= 8.0 + 1e-9; e += 0.25) ebno.push_back(e);
  for (int i = 0; i <= 20; ++i) ia.push_back(i / 20.0);
  for (double e : ebno)
    for (double a : ia) {
      double snr = std::pow(10.0, e / 10.0);
      table.push_back(std::min(1.0, 1.0 - std::exp(-0.8 * snr * (0.35 + 1.2 * a))));
    }
  return ExitSurface("bench", std::move(ebno), std::move(ia), std::move(table), 0, 0, 1.0);
}

void BM_JFun(benchmark::State& state) {
  double x = 0.0, acc = 0.0;
  for (auto _ : state) {
    acc += j_fun_table(x);
    x += 1e-4;
    if (x > 12.0) x = 0.0;
  }
  benchmark::DoNotOptimize(acc);
}

void BM_JInv(benchmark::State& state) {
  double x = 0.0, acc = 0.0;
  for (auto _ : state) {
    acc += j_inv(x);
    x += 1e-5;
    if (x > 0.999) x = 0.0;
  }
  benchmark::DoNotOptimize(acc);
}

void BM_PexitIterationBudget(benchmark::State& state) {
  ExitSurface s = bench_surface();
  Protomatrix p = builtin_code(state.range(0) == 0 ? "isi-1/2" : "rc-27/41");
  for (auto _ : state) {
    PexitResult r = pexit_converges(p, s, 2.0, PexitOptions{200, 1e-4, 0.0});
    benchmark::DoNotOptimize(r.iterations);
  }
}

}  // namespace

BENCHMARK(BM_JFun);
BENCHMARK(BM_JInv);
BENCHMARK(BM_PexitIterationBudget)->Arg(0)->Arg(1);
