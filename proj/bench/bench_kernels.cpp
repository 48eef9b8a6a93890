// Serial reference against the OpenMP kernel for each parallel hot spot.

#include <benchmark/benchmark.h>

#include "ixm/finite_model.hpp"
#include "ixm/harness.hpp"
#include "ixm/partition.hpp"

namespace {

  // Generators of I_5: Sym(5) plus a rank-4 chart.
  std::vector<ixm::FMap> i5_gens() {
    return {ixm::FMap::from({1, 2, 3, 4, 0}), ixm::FMap::from({1, 0, 2, 3, 4}),
            ixm::FMap::from({-1, 1, 2, 3, 4})};
  }

  void closure_serial(benchmark::State& state) {
    auto gens = i5_gens();
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::closure_serial(gens).size());
    }
  }

  void closure_parallel(benchmark::State& state) {
    auto gens = i5_gens();
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::closure(gens).size());
    }
  }

  void nxn_serial(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::nxn_exhaustive_serial(3).failures);
    }
  }

  void nxn_parallel(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::nxn_exhaustive(3).failures);
    }
  }

  void suite_serial(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::run_suite_serial("closure-P", 1, 200).hash);
    }
  }

  void suite_parallel(benchmark::State& state) {
    for (auto _ : state) {
      benchmark::DoNotOptimize(ixm::run_suite("closure-P", 1, 200).hash);
    }
  }

}  // namespace

BENCHMARK(closure_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(closure_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(nxn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(nxn_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(suite_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(suite_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
