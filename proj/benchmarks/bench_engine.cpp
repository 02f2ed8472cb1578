#include <benchmark/benchmark.h>

#include "iav/engine.hpp"

namespace {

using namespace iav;

void BM_BenchmarkStep(benchmark::State& state) {
  Simulation sim(benchmark_scenario(), 1);
  sim.run(200);  // past spawn transients
  for (auto _ : state) sim.step();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_BenchmarkStep);

void BM_BenchmarkRun(benchmark::State& state) {
  for (auto _ : state) {
    Simulation sim(benchmark_scenario(), 1);
    sim.run(static_cast<Step>(state.range(0)));
    benchmark::DoNotOptimize(sim.collisions());
  }
}
BENCHMARK(BM_BenchmarkRun)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
  Simulation sim(benchmark_scenario(), 1);
  sim.run(500);
  const WorldSnapshot w = sim.snapshot();
  const SensorConfig cfg;
  for (auto _ : state)
    for (StationId id = 1; id <= 10; ++id) benchmark::DoNotOptimize(scan(w, id, cfg));
}
BENCHMARK(BM_Scan);

}  // namespace
BENCHMARK_MAIN();
