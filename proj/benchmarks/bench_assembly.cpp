#include <benchmark/benchmark.h>

#include "witten/catalog.hpp"
#include "witten/deformation.hpp"
#include "witten/simplicial.hpp"

using namespace witten;

static void BM_DeformDec(benchmark::State& state) {
  const auto torus = generate("torus_grid", {0, static_cast<int>(state.range(0)), static_cast<int>(state.range(0))});
  const auto stars = combinatorial_stars(torus);
  const auto f = sample_barycenters(torus, catalog_function("torus/cos+cos").ambient);
  for (auto _ : state) {
    const auto d = deform(torus, stars, f, 5.0);
    benchmark::DoNotOptimize(witten_laplacian_dec(d, 1).dim());
  }
}
BENCHMARK(BM_DeformDec)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GridRoutes(benchmark::State& state) {
  const auto spec = catalog_function("torus/cos+cos");
  const TorusGrid grid{2, 64, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    if (state.range(1)) {
      benchmark::DoNotOptimize(grid_witten_laplacian(grid, spec, 5.0, 1).dim());
    } else {
      benchmark::DoNotOptimize(grid_conjugated_laplacian(grid, spec, 5.0, 1).dim());
    }
  }
}
BENCHMARK(BM_GridRoutes)->Args({2, 0})->Args({2, 1})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

static void BM_CoboundaryIcosphere(benchmark::State& state) {
  const auto ico = generate("icosphere", {static_cast<int>(state.range(0)), 0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(coboundary(ico, 1).nonZeros());
}
BENCHMARK(BM_CoboundaryIcosphere)->Arg(2)->Arg(4);
