#include <benchmark/benchmark.h>

#include "morse_causal/morse_causal.hpp"

using namespace morse;

namespace {

const MorseChart kB8 = MorseChart::make(8);

void BM_ReachGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = reach_grid(kB8, kQProjection, Orientation::Past, Domain{}, n, n, 0.01);
    benchmark::DoNotOptimize(g.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ReachGrid)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_VerifyHyperbola(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto c = verify_hyperbola(8, 0.102, 6, 50, n);
    benchmark::DoNotOptimize(c.min_margin);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_VerifyHyperbola)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_AssembleBarrier(benchmark::State& state) {
  AssembleOptions opt;
  opt.construction = static_cast<Construction>(state.range(0));
  for (auto _ : state) {
    auto c = assemble_barrier(opt);
    benchmark::DoNotOptimize(c.min_margin);
  }
}
BENCHMARK(BM_AssembleBarrier)
    ->Arg(static_cast<int>(Construction::HolderField))
    ->Arg(static_cast<int>(Construction::Literal))
    ->Unit(benchmark::kMillisecond);

void BM_ClassifyPlane(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    x = x > 1.0 ? 0.1 : x + 1e-6;
    benchmark::DoNotOptimize(classify_plane(kB8, {x, 0.3}, {1.0, x}));
  }
}
BENCHMARK(BM_ClassifyPlane);

void BM_HyperbolicEscape(benchmark::State& state) {
  for (auto _ : state) {
    auto e = hyperbolic_escape(kB8, 0.1, 1e-4);
    benchmark::DoNotOptimize(e.crossing_height);
  }
}
BENCHMARK(BM_HyperbolicEscape)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
