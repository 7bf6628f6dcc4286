#include <benchmark/benchmark.h>

#include "cauchy_est/estimators.hpp"
#include "cauchy_est/mle.hpp"
#include "cauchy_est/sampling.hpp"

using namespace cauchy_est;

namespace {

SampleBatch batch(benchmark::State& state) {
  return sample_cauchy(static_cast<std::size_t>(state.range(0)), HalfPlanePoint(0.0, 1.0), {42, 0});
}

}  // namespace

static void BM_SampleCauchy(benchmark::State& state) {
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_cauchy(static_cast<std::size_t>(state.range(0)), HalfPlanePoint(0.0, 1.0), {1, stream++}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCauchy)->Arg(10)->Arg(100)->Arg(1000);

static void BM_OneStepF3(benchmark::State& state) {
  const SampleBatch b = batch(state);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_pipeline(Generator::f3(), b.values(), false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OneStepF3)->Arg(10)->Arg(100)->Arg(1000);

static void BM_OneStepF1MedianAdjusted(benchmark::State& state) {
  const SampleBatch b = batch(state);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_pipeline(Generator::f1(), b.values(), true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OneStepF1MedianAdjusted)->Arg(10)->Arg(100)->Arg(1000);

static void BM_Mle(benchmark::State& state) {
  const SampleBatch b = batch(state);
  for (auto _ : state) benchmark::DoNotOptimize(mle(b.values()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mle)->Arg(10)->Arg(100)->Arg(1000);
