// Serial reference kernels against the optimized (OpenMP) ones on a flat image.
#include <benchmark/benchmark.h>

#include "qshift/density.hpp"
#include "qshift/graph.hpp"
#include "qshift/reference.hpp"
#include "qshift/synthetic.hpp"

using namespace qshift;

namespace {

const Hyperparams kParams{3.0, 10.0, 1.0, 1e-5, 0};

Image bench_image(int side) { return flat_image(FlatModel{side, side, {50.0, 0.0, 0.0}, 0.5, 1}); }

void BM_DensityReference(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::density_P(img, kParams, kParams.noise()));
}

void BM_DensityParallel(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(density_P(img, kParams));
}

void BM_OriginalGraphReference(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const DensityField p = density_P(img, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_graph_original(img, p, kParams));
}

void BM_OriginalGraphParallel(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const DensityField p = density_P(img, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_original(img, p, kParams));
}

void BM_SimplifiedGraphReference(benchmark::State& state) {
  const DensityField f = uniform_field(Shape{int(state.range(0)), int(state.range(0))}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_graph_simplified(f, 9, 10.0));
}

void BM_SimplifiedGraphParallel(benchmark::State& state) {
  const DensityField f = uniform_field(Shape{int(state.range(0)), int(state.range(0))}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_simplified(f, 9, 10.0));
}

}  // namespace

BENCHMARK(BM_DensityReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensityParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OriginalGraphReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OriginalGraphParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimplifiedGraphReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimplifiedGraphParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
