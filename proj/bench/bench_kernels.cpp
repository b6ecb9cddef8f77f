// Serial references against the OpenMP kernels. Set MCHR_THREADS to vary the worker count.

#include <benchmark/benchmark.h>

#include "common.hpp"
#include "mchr/io.hpp"
#include "mchr/precedence.hpp"
#include "mchr/simulate.hpp"

using namespace mchr;

namespace {

const ModelSpec& thls3() {
  static const ModelSpec m = load_model(testing::fixture("thls3.json"));
  return m;
}

const ModelSpec& independent8() {
  static const ModelSpec m = [] {
    testing::Gen g(8);
    return g.independent(8);
  }();
  return m;
}

const std::vector<double> kGrid{0.1, 0.2, 0.4, 0.8, 1.6};

void BM_AlphaVectorSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::estimate_alpha_vector(thls3(), SubsetMask::full(3), state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AlphaVectorParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(estimate_alpha_vector(thls3(), SubsetMask::full(3), state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SurvivalSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::estimate_survival(thls3(), SubsetMask::full(3), kGrid, state.range(0), 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SurvivalParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_survival(thls3(), SubsetMask::full(3), kGrid, state.range(0), 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AlphaTableSerial(benchmark::State& state) {
  const auto masks = subsets_by_size(8, 2, 8);
  for (auto _ : state) benchmark::DoNotOptimize(serial::build_alpha_table(independent8(), masks));
}

void BM_AlphaTableParallel(benchmark::State& state) {
  const auto masks = subsets_by_size(8, 2, 8);
  for (auto _ : state) benchmark::DoNotOptimize(AlphaTable::build(independent8(), masks));
}

}  // namespace

BENCHMARK(BM_AlphaVectorSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaVectorParallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurvivalSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurvivalParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaTableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaTableParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
