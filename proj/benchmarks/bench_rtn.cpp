#include <benchmark/benchmark.h>

#include "rtn/gate.hpp"
#include "rtn/irrep.hpp"
#include "rtn/observables.hpp"

namespace {

void bm_gram_build(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const rtn::CommutantBasis basis = rtn::symmetric_basis(k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rtn::gram_matrix(basis, 4));
  }
}
BENCHMARK(bm_gram_build)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void bm_weingarten(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const rtn::CommutantBasis basis = rtn::symmetric_basis(k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rtn::weingarten_matrix(basis, 4));
  }
}
BENCHMARK(bm_weingarten)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void bm_dressed_gate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const rtn::CommutantBasis basis = rtn::symmetric_basis(k);
  const rtn::GramMatrix link = rtn::gram_matrix(basis, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rtn::dressed_gate(basis, 2, link, link));
  }
}
BENCHMARK(bm_dressed_gate)->Arg(2)->Arg(3)->Arg(4);

void bm_layer(benchmark::State& state, bool reduced) {
  const int k = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const rtn::CommutantBasis basis = rtn::symmetric_basis(k);
  rtn::NetworkPlan plan = rtn::make_plan(basis, 2, n, nullptr, nullptr);
  if (reduced) {
    const rtn::IrrepProjector pr = rtn::irrep_projector(rtn::gram_matrix(basis, 2));
    plan = rtn::reduce_plan(plan, pr);
  }
  rtn::TruncationParams trunc;
  for (auto _ : state) {
    rtn::RowMPS mps = rtn::init_mps_pairs(n, plan.pair_mats, true);
    int max_chi = 0;
    for (int layer = 2; layer <= 9; ++layer) {
      const rtn::LayerStats stats = rtn::apply_layer(
          mps, plan.gate, layer % 2 == 0 ? rtn::Parity::even : rtn::Parity::odd, trunc);
      max_chi = std::max(max_chi, stats.max_chi);
    }
    benchmark::DoNotOptimize(max_chi);
  }
}

void bm_layer_full(benchmark::State& state) { bm_layer(state, false); }
void bm_layer_reduced(benchmark::State& state) { bm_layer(state, true); }
BENCHMARK(bm_layer_full)->Args({4, 8})->Args({3, 12});
BENCHMARK(bm_layer_reduced)->Args({4, 8})->Args({3, 12});

}  // namespace

BENCHMARK_MAIN();
