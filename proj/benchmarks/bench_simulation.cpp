#include <benchmark/benchmark.h>

#include "cauchy_est/simulation.hpp"

using namespace cauchy_est;

// One table cell at reduced replication count; workers from the argument.
static void BM_RunMseCell(benchmark::State& state) {
  MseScenario s;
  s.n = 100;
  s.replications = 2000;
  const RunOptions opts{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run_mse(s, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.replications));
}
BENCHMARK(BM_RunMseCell)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
