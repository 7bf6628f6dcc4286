#include <benchmark/benchmark.h>

#include "cauchy_est/geometry.hpp"

using namespace cauchy_est;

static void BM_KlHalfplane(benchmark::State& state) {
  const HalfPlanePoint a(0.3, 1.7), b(-2.0, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(kl_halfplane(a, b));
}
BENCHMARK(BM_KlHalfplane);

static void BM_MobiusRoundTrip(benchmark::State& state) {
  const HalfPlanePoint alpha(0.0, 1.0);
  const DiskPoint w(0.5, -0.25);
  for (auto _ : state) {
    const HalfPlanePoint z = mobius_to_halfplane(w, alpha);
    benchmark::DoNotOptimize(mobius_to_disk(z, alpha));
  }
}
BENCHMARK(BM_MobiusRoundTrip);
