#include <benchmark/benchmark.h>

#include "isildpc/bcjr.hpp"
#include "isildpc/rng.hpp"

using namespace isildpc;

namespace {

void run_detector(benchmark::State& state, const ChannelPoly& h) {
  const int n = static_cast<int>(state.range(0));
  Trellis t = make_trellis(h);
  NoiseModel noise = NoiseModel::with_sigma(0.8);
  Rng rng(1);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (auto& b : bits) b = rng.bit() ? 1 : 0;
  std::vector<double> y = transmit(bits, h, noise, rng);
  std::vector<double> prior(static_cast<std::size_t>(n), 0.0);
  for (auto _ : state) {
    auto ext = bcjr_detect(y, prior, t, noise.sigma);
    benchmark::DoNotOptimize(ext.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_BcjrDicode(benchmark::State& state) { run_detector(state, ChannelPoly::dicode()); }
void BM_BcjrEpr4(benchmark::State& state) { run_detector(state, ChannelPoly::epr4()); }

}  // namespace

BENCHMARK(BM_BcjrDicode)->Arg(2400)->Arg(32736);
BENCHMARK(BM_BcjrEpr4)->Arg(2400)->Arg(32736);
