#include <benchmark/benchmark.h>

#include "spingas/billiard.hpp"
#include "spingas/rng.hpp"

using namespace spingas;

// Pair-event search over the published gas: 100 unit balls in a 150^3 box.
static void BM_BilliardNextPairEvent(benchmark::State& state) {
  RngStream rng(1, 0);
  BallState balls = billiard_init(static_cast<int>(state.range(0)), 1.0,
                                  Eigen::Vector3d(150, 150, 150), 1.0, 0.32,
                                  rng);
  BilliardSource source(std::move(balls));
  for (auto _ : state) {
    benchmark::DoNotOptimize(source.next());
  }
}
BENCHMARK(BM_BilliardNextPairEvent)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
