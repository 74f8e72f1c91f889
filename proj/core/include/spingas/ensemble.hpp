#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spingas/billiard.hpp"
#include "spingas/classical.hpp"
#include "spingas/engines.hpp"

namespace spingas {

struct ModelSpec {
  enum class Kind { RandomPairs, Chain, LatticeGas, Billiard };
  enum class LatticeInit { Block, UniformRandom };

  Kind kind = Kind::RandomPairs;
  int particles = 0;

  // lattice gas
  int sites = 0;
  LatticeInit lattice_init = LatticeInit::Block;

  // billiard
  double diameter = 1.0;
  double mass = 1.0;
  double velocity_sigma = 0.0;
  Eigen::Vector3d box = Eigen::Vector3d::Zero();
};

struct InitialStateSpec {
  enum class Kind {
    SingleExcitation,  // |k>, 0-based particle index
    Computational,     // bit string, char 0 = particle 0
    Superposition      // c0 |0...0> + c1 |10...0>
  };
  Kind kind = Kind::SingleExcitation;
  int excited = 0;
  std::string bits;
  Complex c0{1.0, 0.0};
  Complex c1{0.0, 0.0};
};

enum class EngineKind { Subspace, Full };

struct TrajectoryPlan {
  ModelSpec model;
  Coupling coupling = Coupling::XX;
  double eta = 0.1;
  EngineKind engine = EngineKind::Subspace;
  InitialStateSpec initial_state;
  std::int64_t steps = 0;
  std::vector<std::int64_t> sample_times;  // ascending, within [0, steps]
  std::uint64_t seed = 1;
  int n_traj = 1;
  bool accumulate_density = true;

  void validate() const;
  Eigen::Index state_dim() const;  // particles (subspace) or 2^n (full)
};

// Dense per-step sampling up to this horizon; strided above, capped at
// `cap` interior samples. 0 and steps are always included.
std::vector<std::int64_t> default_sample_times(std::int64_t steps,
                                               std::int64_t cap = 200);

// The classical initial configuration shared by every trajectory of a plan
// (drawn from the reserved init stream of the plan seed where random).
class SharedClassicalInit {
 public:
  explicit SharedClassicalInit(const TrajectoryPlan& plan);
  // Event source for one trajectory; motion randomness comes from the
  // trajectory-indexed stream.
  std::unique_ptr<EventSource> make_source(const TrajectoryPlan& plan,
                                           int trajectory) const;

 private:
  std::optional<LatticeConfiguration> lattice_;
  std::optional<BallState> balls_;
};

struct TrajectorySample {
  std::int64_t step;
  std::size_t ordinal;  // position in plan.sample_times
  const Eigen::VectorXcd& state;
  double c_tot;
  const Eigen::VectorXd& probs;
};

using SampleSink = std::function<void(const TrajectorySample&)>;

// Runs one trajectory, calling the sink at each sample time in order.
// Deterministic given (plan.seed, trajectory); identical results whichever
// worker runs it. Events may optionally be teed to / replayed from a source
// override (used by the CLI dump/replay paths).
void run_trajectory(const TrajectoryPlan& plan, int trajectory,
                    const SampleSink& sink,
                    const SharedClassicalInit* shared_init = nullptr,
                    EventSource* source_override = nullptr);

// Sum of snapshot outer products and net concurrences per sample time.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator(std::size_t n_samples, Eigen::Index dim, bool density);

  void add_sample(const TrajectorySample& s);
  void finish_trajectory() { ++count_; }
  void merge(const EnsembleAccumulator& other);

  std::int64_t count() const { return count_; }
  bool has_density() const { return !rho_sums_.empty(); }
  const Eigen::MatrixXcd& rho_sum(std::size_t i) const { return rho_sums_[i]; }
  double ctot_sum(std::size_t i) const { return ctot_sums_[i]; }
  std::size_t samples() const { return ctot_sums_.size(); }
  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_;
  std::vector<Eigen::MatrixXcd> rho_sums_;
  std::vector<double> ctot_sums_;
  std::int64_t count_ = 0;
};

struct EnsembleSeries {
  std::vector<std::int64_t> steps;
  std::vector<Eigen::MatrixXcd> rho;  // normalized, symmetrized
  std::vector<double> entropy;        // von Neumann, bits
  std::vector<double> diag_entropy;   // Shannon of the diagonal, bits
  std::vector<double> cbar;           // mean per-trajectory net concurrence
  std::vector<double> sigma2;         // inhomogeneity of the rho diagonal
  std::vector<double> rho_ctot;       // net concurrence of rho itself
  std::vector<Eigen::VectorXd> probs;
  // full engine only: even-weight diagonal mass and even/odd coherence mass
  std::vector<double> parity_even;
  std::vector<double> parity_cross;
  Eigen::MatrixXd final_concurrence_table;
};

EnsembleSeries finalize(const TrajectoryPlan& plan,
                        const EnsembleAccumulator& acc);

// One batch of trajectories for convergence monitoring.
struct DensityBatch {
  Eigen::MatrixXcd rho_sum;
  std::int64_t count = 0;
};

struct ConvergenceReport {
  Eigen::MatrixXd variance;  // element-wise variance across batch means
  double max_variance = 0.0;
  int batches = 0;
};

// Element-wise variance of batch-mean density estimates:
// var(i,j) = mean_b |m_b(i,j)|^2 - |mean_b m_b(i,j)|^2.
ConvergenceReport convergence_monitor(std::span<const DensityBatch> batches);

struct EnsembleOptions {
  int workers = 0;          // 0 = hardware concurrency
  bool deterministic = true;
  int convergence_window = 16;  // number of batches blocks are grouped into
};

struct EnsembleResult {
  EnsembleSeries series;
  ConvergenceReport convergence;
};

// Trajectories run in fixed blocks of kReductionBlock; block partials merge
// in block order, so the result is bit-identical for any worker count.
inline constexpr int kReductionBlock = 16;

EnsembleResult run_ensemble(const TrajectoryPlan& plan,
                            const EnsembleOptions& options = {});

// Builds the initial engine state vector for a plan.
Eigen::VectorXcd initial_state_vector(const TrajectoryPlan& plan);

}  // namespace spingas
