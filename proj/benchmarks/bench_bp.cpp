#include <benchmark/benchmark.h>

#include "isildpc/bp.hpp"
#include "isildpc/encoder.hpp"
#include "isildpc/lifting.hpp"
#include "isildpc/rng.hpp"

using namespace isildpc;

namespace {

void BM_BpDecodeDesk(benchmark::State& state) {
  QcCode q = circulant_lift_stage2(peg_lift_stage1(builtin_code("isi-1/2"), 4, 7),
                                   static_cast<int>(state.range(0)), 7);
  SparseBinaryMatrix h = to_parity_matrix(q);
  BpDecoder decoder(h);
  DecodeConfig cfg;
  cfg.bp_iters = 20;
  Rng rng(3);
  std::vector<double> llr(static_cast<std::size_t>(h.cols()));
  for (auto& v : llr) v = 2.0 + 1.5 * rng.gaussian();  // noisy all-zero frame
  for (auto _ : state) {
    BpResult r = decoder.decode(llr, cfg);
    benchmark::DoNotOptimize(r.bits.data());
  }
  state.SetItemsProcessed(state.iterations() * h.nnz() * cfg.bp_iters);
}

void BM_Encode(benchmark::State& state) {
  QcCode q = circulant_lift_stage2(peg_lift_stage1(builtin_code("isi-1/2"), 4, 7),
                                   static_cast<int>(state.range(0)), 7);
  Encoder enc(to_parity_matrix(q));
  Rng rng(5);
  std::vector<std::uint8_t> payload(static_cast<std::size_t>(enc.k()));
  for (auto& b : payload) b = rng.bit() ? 1 : 0;
  for (auto _ : state) {
    auto cw = enc.encode(payload);
    benchmark::DoNotOptimize(cw.data());
  }
  state.SetItemsProcessed(state.iterations() * enc.n());
}

}  // namespace

BENCHMARK(BM_BpDecodeDesk)->Arg(100)->Arg(1364);
BENCHMARK(BM_Encode)->Arg(100)->Arg(1364);
