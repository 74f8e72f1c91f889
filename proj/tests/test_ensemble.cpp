#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "spingas/classical.hpp"
#include "spingas/ensemble.hpp"
#include "spingas/errors.hpp"
#include "spingas/observables.hpp"

using namespace spingas;

namespace {

TrajectoryPlan base_plan() {
  TrajectoryPlan plan;
  plan.model.kind = ModelSpec::Kind::RandomPairs;
  plan.model.particles = 4;
  plan.eta = 0.5;
  plan.steps = 10;
  plan.sample_times = default_sample_times(10);
  plan.n_traj = 4;
  return plan;
}

void feed(EnsembleAccumulator& acc, const Eigen::VectorXcd& state,
          std::size_t ordinal, std::int64_t step) {
  const Eigen::VectorXd probs = single_particle_probs(state);
  acc.add_sample(TrajectorySample{step, ordinal, state,
                                  total_concurrence(state), probs});
}

}  // namespace

TEST_CASE("plan validation rejects malformed plans") {
  CHECK_NOTHROW(base_plan().validate());

  auto p = base_plan();
  p.model.particles = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.model.kind = ModelSpec::Kind::LatticeGas;
  p.model.sites = 3;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.model.kind = ModelSpec::Kind::Billiard;
  p.model.velocity_sigma = 0.3;
  p.model.box = Eigen::Vector3d(0.5, 10.0, 10.0);  // narrower than a ball
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.sample_times = {0, 11};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.sample_times = {3, 3};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.sample_times.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.coupling = Coupling::Ising;  // leaves the single-excitation sector
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.initial_state.excited = 4;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.initial_state.kind = InitialStateSpec::Kind::Superposition;
  p.initial_state.c0 = 1.0;
  p.initial_state.c1 = 1.0;
  p.engine = EngineKind::Full;
  CHECK_THROWS_AS(p.validate(), ConfigError);

  p = base_plan();
  p.engine = EngineKind::Full;
  p.model.particles = 13;
  CHECK_THROWS_AS(p.validate(), CapacityError);

  // 11 and 12 qubits are fine for a single trajectory but too large to
  // average densities over.
  p = base_plan();
  p.engine = EngineKind::Full;
  p.model.particles = 11;
  p.n_traj = 1;
  CHECK_NOTHROW(p.validate());
  p.n_traj = 2;
  CHECK_THROWS_AS(p.validate(), CapacityError);
}

TEST_CASE("state dimensions and initial vectors") {
  auto p = base_plan();
  CHECK(p.state_dim() == 4);
  p.initial_state.excited = 2;
  CHECK(initial_state_vector(p)[2] == Complex(1.0, 0.0));

  p.engine = EngineKind::Full;
  p.coupling = Coupling::Ising;
  p.initial_state = InitialStateSpec{};
  p.initial_state.kind = InitialStateSpec::Kind::Computational;
  p.initial_state.bits = "0110";
  CHECK(p.state_dim() == 16);
  const Eigen::VectorXcd v = initial_state_vector(p);
  CHECK(v[0b0110] == Complex(1.0, 0.0));
  CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0));

  p.coupling = Coupling::XX;
  p.initial_state.kind = InitialStateSpec::Kind::Superposition;
  p.initial_state.bits.clear();
  p.initial_state.c0 = std::sqrt(0.5);
  p.initial_state.c1 = std::sqrt(0.5);
  const Eigen::VectorXcd s = initial_state_vector(p);
  CHECK(s[0] == Complex(std::sqrt(0.5), 0.0));
  CHECK(s[0b1000] == Complex(std::sqrt(0.5), 0.0));
}

TEST_CASE("default sample times") {
  const auto dense = default_sample_times(100);
  CHECK(dense.size() == 101);
  CHECK(dense.front() == 0);
  CHECK(dense.back() == 100);

  CHECK(default_sample_times(2000).size() == 2001);

  const auto strided = default_sample_times(20000);
  CHECK(strided.size() == 201);
  CHECK(strided.front() == 0);
  CHECK(strided.back() == 20000);
  CHECK(strided[1] == 100);
  for (std::size_t i = 1; i < strided.size(); ++i) {
    REQUIRE(strided[i] > strided[i - 1]);
  }

  // The endpoint is always present even when the stride misses it.
  const auto ragged = default_sample_times(2001);
  CHECK(ragged.front() == 0);
  CHECK(ragged.back() == 2001);
  CHECK(ragged.size() <= 203);

  CHECK(default_sample_times(0) == std::vector<std::int64_t>{0});
}

TEST_CASE("accumulator of two orthogonal snapshots mixes to I/2") {
  auto plan = base_plan();
  plan.model.particles = 2;
  plan.steps = 1;
  plan.sample_times = {1};
  plan.n_traj = 2;

  EnsembleAccumulator acc(1, 2, true);
  feed(acc, Eigen::VectorXcd::Unit(2, 0), 0, 1);
  acc.finish_trajectory();
  feed(acc, Eigen::VectorXcd::Unit(2, 1), 0, 1);
  acc.finish_trajectory();
  CHECK(acc.count() == 2);

  const EnsembleSeries series = finalize(plan, acc);
  CHECK(series.steps == std::vector<std::int64_t>{1});
  CHECK((series.rho[0] - Eigen::MatrixXcd::Identity(2, 2) * 0.5)
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK(series.entropy[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.diag_entropy[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.cbar[0] == doctest::Approx(0.0));
  CHECK(series.rho_ctot[0] == doctest::Approx(0.0));
  CHECK(series.sigma2[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(series.probs[0][0] == doctest::Approx(0.5));
}

TEST_CASE("accumulator of identical snapshots stays pure") {
  auto plan = base_plan();
  plan.model.particles = 2;
  plan.steps = 1;
  plan.sample_times = {1};
  plan.n_traj = 3;

  Eigen::VectorXcd psi(2);
  psi << std::sqrt(0.5), std::sqrt(0.5);
  EnsembleAccumulator acc(1, 2, true);
  for (int i = 0; i < 3; ++i) {
    feed(acc, psi, 0, 1);
    acc.finish_trajectory();
  }
  const EnsembleSeries series = finalize(plan, acc);
  CHECK(series.entropy[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(series.diag_entropy[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.cbar[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(series.rho_ctot[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("merging accumulators equals sequential accumulation") {
  Eigen::VectorXcd a(2), b(2);
  a << 1.0, 0.0;
  b << std::sqrt(0.5), Complex(0.0, std::sqrt(0.5));

  EnsembleAccumulator whole(1, 2, true);
  feed(whole, a, 0, 1);
  whole.finish_trajectory();
  feed(whole, b, 0, 1);
  whole.finish_trajectory();

  EnsembleAccumulator left(1, 2, true), right(1, 2, true);
  feed(left, a, 0, 1);
  left.finish_trajectory();
  feed(right, b, 0, 1);
  right.finish_trajectory();
  left.merge(right);

  CHECK(left.count() == whole.count());
  CHECK((left.rho_sum(0) - whole.rho_sum(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(left.ctot_sum(0) == whole.ctot_sum(0));

  EnsembleAccumulator mismatched(2, 2, true);
  CHECK_THROWS_AS(left.merge(mismatched), InvalidInputError);
}

TEST_CASE("convergence monitor variance of batch means") {
  const Eigen::MatrixXcd m0 = Eigen::MatrixXcd::Identity(2, 2);
  std::vector<DensityBatch> same = {{m0 * 4.0, 4}, {m0 * 2.0, 2}};
  const ConvergenceReport r0 = convergence_monitor(same);
  CHECK(r0.batches == 2);
  CHECK(r0.max_variance == doctest::Approx(0.0).epsilon(1e-15));

  Eigen::MatrixXcd d0 = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd d1 = Eigen::MatrixXcd::Zero(2, 2);
  d0(0, 0) = 1.0;
  d1(1, 1) = 1.0;
  std::vector<DensityBatch> split = {{d0, 1}, {d1, 1}};
  const ConvergenceReport r1 = convergence_monitor(split);
  // Each diagonal element alternates between 0 and 1: variance 1/4.
  CHECK(r1.max_variance == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r1.variance(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r1.variance(0, 1) == doctest::Approx(0.0));

  CHECK_THROWS_AS(convergence_monitor({}), InvalidInputError);
}

TEST_CASE("trajectories replay identically and differ across indices") {
  auto plan = base_plan();
  plan.model.particles = 6;
  plan.steps = 40;
  plan.sample_times = default_sample_times(40);

  std::vector<Eigen::VectorXcd> first, second, other;
  auto collect = [](std::vector<Eigen::VectorXcd>& into) {
    return [&into](const TrajectorySample& s) { into.push_back(s.state); };
  };
  run_trajectory(plan, 3, collect(first));
  run_trajectory(plan, 3, collect(second));
  run_trajectory(plan, 4, collect(other));

  REQUIRE(first.size() == 41);
  REQUIRE(second.size() == 41);
  for (std::size_t i = 0; i < first.size(); ++i) {
    REQUIRE((first[i] - second[i]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((first.back() - other.back()).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("worker count does not change the deterministic reduction") {
  auto plan = base_plan();
  plan.model.particles = 5;
  plan.steps = 50;
  plan.sample_times = default_sample_times(50);
  plan.n_traj = 48;  // three reduction blocks

  EnsembleOptions one;
  one.workers = 1;
  EnsembleOptions three;
  three.workers = 3;
  const EnsembleResult a = run_ensemble(plan, one);
  const EnsembleResult b = run_ensemble(plan, three);

  REQUIRE(a.series.entropy.size() == b.series.entropy.size());
  for (std::size_t i = 0; i < a.series.entropy.size(); ++i) {
    REQUIRE(a.series.entropy[i] == b.series.entropy[i]);
    REQUIRE(a.series.cbar[i] == b.series.cbar[i]);
    REQUIRE((a.series.rho[i] - b.series.rho[i]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(a.convergence.max_variance == b.convergence.max_variance);
}

TEST_CASE("mean trajectory concurrence bounds the ensemble concurrence") {
  // |rho_kl| is convex in rho, so averaging cannot raise the net
  // concurrence above the mean of the per-trajectory values.
  auto plan = base_plan();
  plan.model.kind = ModelSpec::Kind::LatticeGas;
  plan.model.particles = 4;
  plan.model.sites = 6;
  plan.eta = 1.0;
  plan.steps = 200;
  plan.sample_times = default_sample_times(200);
  plan.n_traj = 64;

  const EnsembleResult r = run_ensemble(plan);
  for (std::size_t i = 0; i < r.series.cbar.size(); ++i) {
    REQUIRE(r.series.rho_ctot[i] <= r.series.cbar[i] + 1e-12);
  }
  // Dephasing across trajectories: the gap opens once mixing starts.
  CHECK(r.series.rho_ctot.back() < 0.5 * r.series.cbar.back());
}

TEST_CASE("Monte Carlo matches exact path enumeration") {
  // Two particles on a 3-site ring, block start |5̲>-style |1,0>: each step
  // picks (particle, direction) uniformly from 4 outcomes. Enumerating all
  // 4^6 paths gives the exact 6-step ensemble density; the sampled ensemble
  // must sit within statistical error of it.
  const double eta = 0.9;
  const int kSteps = 6;

  struct Path {
    LatticeConfiguration cfg;
    Eigen::VectorXcd psi;
  };
  // Gate on the only possible bond (0,1): H = 2X in the two-state basis.
  const double c = std::cos(2.0 * eta), s = std::sin(2.0 * eta);
  Eigen::Matrix2cd bond_gate;
  bond_gate << Complex(c, 0.0), Complex(0.0, -s), Complex(0.0, -s),
      Complex(c, 0.0);

  std::vector<Path> paths{{LatticeConfiguration::block(2, 3),
                           Eigen::VectorXcd::Unit(2, 0)}};
  for (int step = 0; step < kSteps; ++step) {
    std::vector<Path> next;
    next.reserve(paths.size() * 4);
    for (const Path& p : paths) {
      for (int particle = 0; particle < 2; ++particle) {
        for (const int direction : {-1, 1}) {
          Path q = p;
          lattice_hop(q.cfg, particle, direction);
          if (!lattice_neighbor_pairs(q.cfg, step).pairs.empty()) {
            q.psi = bond_gate * q.psi;
          }
          next.push_back(std::move(q));
        }
      }
    }
    paths = std::move(next);
  }
  Eigen::Matrix2cd exact = Eigen::Matrix2cd::Zero();
  for (const Path& p : paths) exact += p.psi * p.psi.adjoint();
  exact /= double(paths.size());

  TrajectoryPlan plan;
  plan.model.kind = ModelSpec::Kind::LatticeGas;
  plan.model.particles = 2;
  plan.model.sites = 3;
  plan.eta = eta;
  plan.steps = kSteps;
  plan.sample_times = {kSteps};
  plan.seed = 7;
  const int kTraj = 40000;

  // Accumulate mean and element-wise second moments for the error bars.
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2d sq = Eigen::Matrix2d::Zero();
  for (int t = 0; t < kTraj; ++t) {
    run_trajectory(plan, t, [&](const TrajectorySample& smp) {
      const Eigen::Matrix2cd proj = smp.state * smp.state.adjoint();
      sum += proj;
      sq += proj.cwiseAbs2();
    });
  }
  const Eigen::Matrix2cd mc = sum / double(kTraj);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double var = std::max(0.0, sq(i, j) / kTraj - std::norm(mc(i, j)));
      const double se = std::sqrt(var / kTraj);
      REQUIRE(std::abs(mc(i, j) - exact(i, j)) <= 3.0 * se + 1e-12);
    }
  }

  // The ensemble runner reduces to the same mean (up to symmetrization).
  plan.n_traj = kTraj;
  const EnsembleResult r = run_ensemble(plan);
  CHECK((r.series.rho.back() - mc).cwiseAbs().maxCoeff() < 1e-12);
}
