#include <benchmark/benchmark.h>

#include <vector>

#include "spingas/classical.hpp"
#include "spingas/engines.hpp"
#include "spingas/linalg.hpp"
#include "spingas/observables.hpp"
#include "spingas/rng.hpp"

using namespace spingas;

namespace {

std::vector<InteractionEvent> lattice_events(int n, int count) {
  RngStream rng(1, 0);
  auto cfg = LatticeConfiguration::uniform_random(n, 2 * n, rng);
  std::vector<InteractionEvent> events;
  events.reserve(count);
  for (int i = 0; i < count; ++i) {
    events.push_back(lattice_gas_step(cfg, rng, i));
  }
  return events;
}

}  // namespace

// Sparse cluster propagation: the per-event cost the simulator actually pays.
static void BM_SubspaceApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto events = lattice_events(n, 256);
  SubspaceEngine engine(Eigen::VectorXcd::Unit(n, n / 2), 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    engine.apply(events[i++ % events.size()]);
  }
  benchmark::DoNotOptimize(engine.state());
}
BENCHMARK(BM_SubspaceApply)->Arg(64)->Arg(256)->Arg(1024);

// Dense reference step (full N x N exponential) for comparison.
static void BM_SubspaceDenseStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto events = lattice_events(n, 32);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Unit(n, n / 2);
  std::size_t i = 0;
  for (auto _ : state) {
    psi = subspace_step(psi, events[i++ % events.size()], 1.0);
  }
  benchmark::DoNotOptimize(psi);
}
BENCHMARK(BM_SubspaceDenseStep)->Arg(64)->Arg(256);

static void BM_FullIsingApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto events = lattice_events(n, 256);
  FullEngine engine(Eigen::VectorXcd::Unit(1 << n, 1), Coupling::Ising, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    engine.apply(events[i++ % events.size()]);
  }
  benchmark::DoNotOptimize(engine.state());
}
BENCHMARK(BM_FullIsingApply)->Arg(5)->Arg(8)->Arg(12);

static void BM_VonNeumannEntropy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(2, 0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(rng.next_normal(1.0), rng.next_normal(1.0));
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  for (auto _ : state) {
    benchmark::DoNotOptimize(von_neumann_entropy(rho));
  }
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(32)->Arg(256);
