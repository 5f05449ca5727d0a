#include <benchmark/benchmark.h>

#include "vine/sweep.hpp"

namespace {

vine::SweepRequest request(std::size_t n, double kappa) {
  vine::SweepRequest req;
  req.curvature = kappa;
  req.pressure = {0.0, 10e3, n};
  req.length = {0.0, 3.0, n};
  return req;
}

void BM_ClassifySerial(benchmark::State& state) {
  const auto req = request(static_cast<std::size_t>(state.range(0)), 1 / 2.25);
  for (auto _ : state) benchmark::DoNotOptimize(vine::classify_grid(req, vine::Execution::Serial));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_ClassifyParallel(benchmark::State& state) {
  const auto req = request(static_cast<std::size_t>(state.range(0)), 1 / 2.25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vine::classify_grid(req, vine::Execution::Parallel));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_OracleScan(benchmark::State& state) {
  const auto req = request(static_cast<std::size_t>(state.range(0)), 1 / 2.25);
  for (auto _ : state) benchmark::DoNotOptimize(vine::oracle_scan(req));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(BM_ClassifySerial)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ClassifyParallel)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleScan)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
