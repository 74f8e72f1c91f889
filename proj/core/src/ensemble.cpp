#include "spingas/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "spingas/errors.hpp"
#include "spingas/observables.hpp"

namespace spingas {

void TrajectoryPlan::validate() const {
  if (model.particles < 2) {
    throw ConfigError("plan needs at least 2 particles");
  }
  if (!std::isfinite(eta)) throw ConfigError("eta must be finite");
  if (steps < 0) throw ConfigError("steps must be nonnegative");
  if (n_traj < 1) throw ConfigError("trajectories must be >= 1");

  switch (model.kind) {
    case ModelSpec::Kind::LatticeGas:
      if (model.sites < model.particles) {
        throw ConfigError("lattice gas needs sites >= particles");
      }
      break;
    case ModelSpec::Kind::Billiard:
      if (model.diameter <= 0.0 || model.mass <= 0.0) {
        throw ConfigError("billiard needs positive diameter and mass");
      }
      if (model.velocity_sigma <= 0.0) {
        throw ConfigError("billiard needs a positive velocity sigma");
      }
      for (int ax = 0; ax < 3; ++ax) {
        if (model.box[ax] < model.diameter) {
          throw ConfigError("billiard box is smaller than one ball");
        }
      }
      break;
    default:
      break;
  }

  if (sample_times.empty()) {
    throw ConfigError("plan has no sample times");
  }
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0 || sample_times[i] > steps) {
      throw ConfigError("sample time outside [0, steps]");
    }
    if (i > 0 && sample_times[i] <= sample_times[i - 1]) {
      throw ConfigError("sample times must be strictly ascending");
    }
  }

  if (engine == EngineKind::Subspace) {
    if (coupling != Coupling::XX) {
      throw ConfigError(
          "the subspace engine only applies to the XX coupling");
    }
    if (initial_state.kind != InitialStateSpec::Kind::SingleExcitation) {
      throw ConfigError(
          "the subspace engine needs a single-excitation initial state");
    }
    if (model.particles > kSubspaceMaxParticles) {
      throw CapacityError("subspace dimension exceeds dense capacity");
    }
  } else {
    if (model.particles > kFullStateMaxQubits) {
      throw CapacityError("full engine limited to " +
                          std::to_string(kFullStateMaxQubits) + " qubits");
    }
    if (n_traj > 1 && accumulate_density &&
        model.particles > kFullDensityMaxQubits) {
      throw CapacityError("density accumulation limited to " +
                          std::to_string(kFullDensityMaxQubits) + " qubits");
    }
  }

  switch (initial_state.kind) {
    case InitialStateSpec::Kind::SingleExcitation:
      if (initial_state.excited < 0 ||
          initial_state.excited >= model.particles) {
        throw ConfigError("excited particle index out of range");
      }
      break;
    case InitialStateSpec::Kind::Computational:
      if (static_cast<int>(initial_state.bits.size()) != model.particles) {
        throw ConfigError("bit string length must equal the particle count");
      }
      for (const char c : initial_state.bits) {
        if (c != '0' && c != '1') {
          throw ConfigError("bit string may contain only 0 and 1");
        }
      }
      break;
    case InitialStateSpec::Kind::Superposition: {
      const double norm =
          std::norm(initial_state.c0) + std::norm(initial_state.c1);
      if (std::abs(norm - 1.0) > 1e-10) {
        throw ConfigError("superposition amplitudes are not normalized");
      }
      break;
    }
  }
}

Eigen::Index TrajectoryPlan::state_dim() const {
  if (engine == EngineKind::Subspace) return model.particles;
  return static_cast<Eigen::Index>(1) << model.particles;
}

std::vector<std::int64_t> default_sample_times(std::int64_t steps,
                                               std::int64_t cap) {
  std::vector<std::int64_t> times;
  if (steps <= 2000) {
    times.reserve(steps + 1);
    for (std::int64_t t = 0; t <= steps; ++t) times.push_back(t);
    return times;
  }
  const std::int64_t stride = (steps + cap - 1) / cap;
  for (std::int64_t t = 0; t < steps; t += stride) times.push_back(t);
  times.push_back(steps);
  return times;
}

Eigen::VectorXcd initial_state_vector(const TrajectoryPlan& plan) {
  const int n = plan.model.particles;
  if (plan.engine == EngineKind::Subspace) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v[plan.initial_state.excited] = 1.0;
    return v;
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1ull << n);
  switch (plan.initial_state.kind) {
    case InitialStateSpec::Kind::SingleExcitation:
      v[1ull << (n - 1 - plan.initial_state.excited)] = 1.0;
      break;
    case InitialStateSpec::Kind::Computational: {
      std::uint64_t idx = 0;
      for (int k = 0; k < n; ++k) {
        if (plan.initial_state.bits[k] == '1') idx |= 1ull << (n - 1 - k);
      }
      v[idx] = 1.0;
      break;
    }
    case InitialStateSpec::Kind::Superposition:
      v[0] = plan.initial_state.c0;
      v[1ull << (n - 1)] = plan.initial_state.c1;
      break;
  }
  return v;
}

SharedClassicalInit::SharedClassicalInit(const TrajectoryPlan& plan) {
  RngStream init_rng(plan.seed, kInitConfigStream);
  switch (plan.model.kind) {
    case ModelSpec::Kind::LatticeGas:
      if (plan.model.lattice_init == ModelSpec::LatticeInit::Block) {
        lattice_ = LatticeConfiguration::block(plan.model.particles,
                                               plan.model.sites);
      } else {
        lattice_ = LatticeConfiguration::uniform_random(
            plan.model.particles, plan.model.sites, init_rng);
      }
      break;
    case ModelSpec::Kind::Billiard:
      balls_ = billiard_init(plan.model.particles, plan.model.diameter,
                             plan.model.box, plan.model.mass,
                             plan.model.velocity_sigma, init_rng);
      break;
    default:
      break;
  }
}

std::unique_ptr<EventSource> SharedClassicalInit::make_source(
    const TrajectoryPlan& plan, int trajectory) const {
  const auto traj_stream = static_cast<std::uint64_t>(trajectory);
  switch (plan.model.kind) {
    case ModelSpec::Kind::RandomPairs:
      return std::make_unique<RandomPairsSource>(
          plan.model.particles, RngStream(plan.seed, traj_stream));
    case ModelSpec::Kind::Chain:
      return std::make_unique<ChainSource>(plan.model.particles);
    case ModelSpec::Kind::LatticeGas:
      return std::make_unique<LatticeGasSource>(
          *lattice_, RngStream(plan.seed, traj_stream));
    case ModelSpec::Kind::Billiard:
      return std::make_unique<BilliardSource>(*balls_);
  }
  throw InvalidInputError("unknown model kind");
}

namespace {

// Engine wrapper so the trajectory loop is engine-agnostic.
struct AnyEngine {
  std::optional<SubspaceEngine> sub;
  std::optional<FullEngine> full;

  void apply_repeated(const InteractionEvent& ev, std::int64_t count) {
    if (sub) {
      sub->apply_repeated(ev, count);
    } else {
      full->apply_repeated(ev, count);
    }
  }
  const Eigen::VectorXcd& state() const {
    return sub ? sub->state() : full->state();
  }
  double norm_error() const {
    return sub ? sub->norm_error() : full->norm_error();
  }
};

}  // namespace

void run_trajectory(const TrajectoryPlan& plan, int trajectory,
                    const SampleSink& sink,
                    const SharedClassicalInit* shared_init,
                    EventSource* source_override) {
  std::optional<SharedClassicalInit> local_init;
  if (shared_init == nullptr && source_override == nullptr) {
    local_init.emplace(plan);
    shared_init = &*local_init;
  }
  std::unique_ptr<EventSource> owned;
  EventSource* source = source_override;
  if (source == nullptr) {
    owned = shared_init->make_source(plan, trajectory);
    source = owned.get();
  }

  AnyEngine engine;
  if (plan.engine == EngineKind::Subspace) {
    engine.sub.emplace(initial_state_vector(plan), plan.eta);
  } else {
    engine.full.emplace(initial_state_vector(plan), plan.coupling, plan.eta);
  }

  const bool subspace = plan.engine == EngineKind::Subspace;
  Eigen::VectorXd probs;
  std::size_t next_sample = 0;
  const auto emit_at = [&](std::int64_t t) {
    while (next_sample < plan.sample_times.size() &&
           plan.sample_times[next_sample] == t) {
      const Eigen::VectorXcd& state = engine.state();
      probs = subspace ? single_particle_probs(state)
                       : single_particle_probs_full(state);
      const double c_tot = subspace ? total_concurrence(state)
                                    : total_pairwise_concurrence_full(state);
      sink(TrajectorySample{t, next_sample, state, c_tot, probs});
      ++next_sample;
    }
  };

  InteractionEvent pending;
  std::int64_t pending_count = 0;
  const auto flush = [&] {
    if (pending_count > 0) {
      engine.apply_repeated(pending, pending_count);
      pending_count = 0;
    }
  };

  emit_at(0);
  const std::int64_t next_sampled_step =
      next_sample < plan.sample_times.size() ? plan.sample_times[next_sample]
                                             : -1;
  std::int64_t upcoming = next_sampled_step;
  for (std::int64_t t = 0; t < plan.steps; ++t) {
    InteractionEvent ev = source->next();
    if (pending_count > 0 && same_pairs(ev, pending)) {
      ++pending_count;
    } else {
      flush();
      pending = std::move(ev);
      pending_count = 1;
    }
    if (t + 1 == upcoming) {
      flush();
      emit_at(t + 1);
      upcoming = next_sample < plan.sample_times.size()
                     ? plan.sample_times[next_sample]
                     : -1;
    }
  }
  flush();

  if (engine.norm_error() > 1e-8) {
    throw NumericError("state norm drifted by " +
                       std::to_string(engine.norm_error()) +
                       " over one trajectory");
  }
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t n_samples,
                                         Eigen::Index dim, bool density)
    : dim_(dim), ctot_sums_(n_samples, 0.0) {
  if (density) {
    rho_sums_.assign(n_samples, Eigen::MatrixXcd::Zero(dim, dim));
  }
}

void EnsembleAccumulator::add_sample(const TrajectorySample& s) {
  if (!rho_sums_.empty()) {
    rho_sums_[s.ordinal].noalias() += s.state * s.state.adjoint();
  }
  ctot_sums_[s.ordinal] += s.c_tot;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.ctot_sums_.size() != ctot_sums_.size() || other.dim_ != dim_ ||
      other.rho_sums_.empty() != rho_sums_.empty()) {
    throw InvalidInputError("cannot merge accumulators of different shapes");
  }
  for (std::size_t i = 0; i < rho_sums_.size(); ++i) {
    rho_sums_[i] += other.rho_sums_[i];
  }
  for (std::size_t i = 0; i < ctot_sums_.size(); ++i) {
    ctot_sums_[i] += other.ctot_sums_[i];
  }
  count_ += other.count_;
}

namespace {

double even_diagonal_mass(const Eigen::MatrixXcd& rho) {
  double mass = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if (std::popcount(static_cast<std::uint64_t>(i)) % 2 == 0) {
      mass += rho(i, i).real();
    }
  }
  return mass;
}

double parity_cross_mass(const Eigen::MatrixXcd& rho) {
  double mass = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const int pi = std::popcount(static_cast<std::uint64_t>(i)) % 2;
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if ((std::popcount(static_cast<std::uint64_t>(j)) % 2) != pi) {
        mass += std::norm(rho(i, j));
      }
    }
  }
  return mass;
}

}  // namespace

EnsembleSeries finalize(const TrajectoryPlan& plan,
                        const EnsembleAccumulator& acc) {
  if (acc.count() < 1) throw InvalidInputError("empty accumulator");
  if (!acc.has_density()) {
    throw InvalidInputError("finalize needs density accumulation");
  }
  const bool subspace = plan.engine == EngineKind::Subspace;
  const double inv = 1.0 / static_cast<double>(acc.count());

  EnsembleSeries out;
  out.steps = plan.sample_times;
  const std::size_t m = acc.samples();
  out.rho.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::MatrixXcd rho = acc.rho_sum(i) * inv;
    rho = 0.5 * (rho + rho.adjoint()).eval();  // Hermitian by construction
    validate_density(rho);

    out.entropy.push_back(von_neumann_entropy(rho));
    out.diag_entropy.push_back(diagonal_shannon_entropy(rho));
    out.cbar.push_back(acc.ctot_sum(i) * inv);

    Eigen::VectorXd p = subspace ? single_particle_probs(rho)
                                 : single_particle_probs_full(rho);
    out.sigma2.push_back(inhomogeneity(p));
    out.probs.push_back(std::move(p));

    if (subspace) {
      out.rho_ctot.push_back(total_concurrence(rho));
    } else {
      out.rho_ctot.push_back(0.5 * concurrence_table_full(rho).sum());
      out.parity_even.push_back(even_diagonal_mass(rho));
      out.parity_cross.push_back(parity_cross_mass(rho));
    }
    out.rho.push_back(std::move(rho));
  }
  if (!out.rho.empty()) {
    out.final_concurrence_table =
        subspace ? concurrence_table(out.rho.back())
                 : concurrence_table_full(out.rho.back());
  }
  return out;
}

ConvergenceReport convergence_monitor(std::span<const DensityBatch> batches) {
  if (batches.empty()) {
    throw InvalidInputError("convergence_monitor: no batches");
  }
  const Eigen::Index dim = batches[0].rho_sum.rows();
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(dim, dim);
  for (const DensityBatch& b : batches) {
    if (b.count < 1 || b.rho_sum.rows() != dim || b.rho_sum.cols() != dim) {
      throw InvalidInputError("convergence_monitor: malformed batch");
    }
    const Eigen::MatrixXcd m = b.rho_sum / static_cast<double>(b.count);
    mean += m;
    sq += m.cwiseAbs2();
  }
  const double inv = 1.0 / static_cast<double>(batches.size());
  mean *= inv;
  sq *= inv;

  ConvergenceReport report;
  report.batches = static_cast<int>(batches.size());
  report.variance = (sq - mean.cwiseAbs2()).cwiseMax(0.0);
  report.max_variance =
      report.variance.size() > 0 ? report.variance.maxCoeff() : 0.0;
  return report;
}

EnsembleResult run_ensemble(const TrajectoryPlan& plan,
                            const EnsembleOptions& options) {
  plan.validate();
  const SharedClassicalInit shared(plan);
  const std::size_t n_samples = plan.sample_times.size();
  const Eigen::Index dim = plan.state_dim();

  const int n_blocks =
      (plan.n_traj + kReductionBlock - 1) / kReductionBlock;
  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, n_blocks);

  EnsembleAccumulator total(n_samples, dim, true);
  std::vector<DensityBatch> block_batches(n_blocks);
  const std::size_t last_sample = n_samples - 1;

  std::mutex merge_mutex;
  std::map<int, EnsembleAccumulator> parked;
  int next_merge = 0;
  std::atomic<int> next_block{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  const auto worker_loop = [&] {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        const int lo = b * kReductionBlock;
        const int hi = std::min<int>(lo + kReductionBlock, plan.n_traj);
        EnsembleAccumulator acc(n_samples, dim, true);
        for (int s = lo; s < hi; ++s) {
          run_trajectory(
              plan, s,
              [&acc](const TrajectorySample& sample) {
                acc.add_sample(sample);
              },
              &shared);
          acc.finish_trajectory();
        }
        block_batches[b] = {acc.rho_sum(last_sample), acc.count()};

        std::lock_guard<std::mutex> lock(merge_mutex);
        if (options.deterministic) {
          parked.emplace(b, std::move(acc));
          while (!parked.empty() && parked.begin()->first == next_merge) {
            total.merge(parked.begin()->second);
            parked.erase(parked.begin());
            ++next_merge;
          }
        } else {
          total.merge(acc);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(merge_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    worker_loop();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker_loop);
    for (auto& t : threads) t.join();
  }
  if (failed.load()) std::rethrow_exception(error);

  EnsembleResult result;
  result.series = finalize(plan, total);

  // Regroup block partials into contiguous batches for the monitor.
  const int window =
      std::clamp(options.convergence_window, 1, n_blocks);
  std::vector<DensityBatch> grouped(window);
  for (int g = 0; g < window; ++g) {
    const int lo = g * n_blocks / window;
    const int hi = (g + 1) * n_blocks / window;
    DensityBatch& batch = grouped[g];
    batch.rho_sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (int b = lo; b < hi; ++b) {
      batch.rho_sum += block_batches[b].rho_sum;
      batch.count += block_batches[b].count;
    }
  }
  result.convergence = convergence_monitor(grouped);
  return result;
}

}  // namespace spingas
