#include <benchmark/benchmark.h>

#include "witten/catalog.hpp"
#include "witten/deformation.hpp"
#include "witten/simplicial.hpp"

using namespace witten;

static void BM_KernelDimensionTorusDec(benchmark::State& state) {
  const auto torus = generate("torus_grid", {0, static_cast<int>(state.range(0)), static_cast<int>(state.range(0))});
  const auto op = hodge_laplacian(torus, combinatorial_stars(torus), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_dimension(op));
  state.counters["dim"] = static_cast<double>(op.dim());
}
BENCHMARK(BM_KernelDimensionTorusDec)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SmallestEigsGrid(benchmark::State& state) {
  const auto spec = catalog_function("torus/cos+cos");
  const auto op = grid_conjugated_laplacian({2, static_cast<int>(state.range(0)), 2}, spec, 10.0, 1);
  SpectrumRequest req;
  req.k = 10;
  req.mode = state.range(1) ? SolverMode::ShiftInvert : SolverMode::ShiftFree;
  for (auto _ : state) benchmark::DoNotOptimize(smallest_eigs(op, req).eigenvalues);
  state.counters["dim"] = static_cast<double>(op.dim());
}
BENCHMARK(BM_SmallestEigsGrid)->Args({16, 0})->Args({16, 1})->Args({32, 1})->Args({64, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
