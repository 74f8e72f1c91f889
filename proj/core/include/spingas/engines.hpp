#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "spingas/classical.hpp"
#include "spingas/linalg.hpp"

namespace spingas {

enum class Coupling { XX, Ising, XXX };

// Dense full-register states are capped at 12 qubits; ensemble density
// accumulation at 10 (the matrix is 2^n x 2^n per sample time).
inline constexpr int kFullStateMaxQubits = 12;
inline constexpr int kFullDensityMaxQubits = 10;
inline constexpr int kSubspaceMaxParticles = 4096;

// ---- single-excitation subspace ----------------------------------------
//
// Basis |k> = one excitation on particle k, k = 0..n-1. The XX Hamiltonian
// restricted to this subspace has matrix element 2 between paired particles
// and is twice the adjacency matrix of the interaction graph.

Eigen::MatrixXcd subspace_hamiltonian(const InteractionEvent& ev, int n);

// Reference step: exponentiates the summed Hamiltonian densely. Terms on
// overlapping pairs do not commute, so the sum is exponentiated as a whole.
Eigen::VectorXcd subspace_step(const Eigen::VectorXcd& state,
                               const InteractionEvent& ev, double eta);

// Production engine. Single-pair events use the closed-form rotation
//   a_k -> cos(2 eta) a_k - i sin(2 eta) a_l   (and symmetrically),
// multi-pair events are split into connected components of the interaction
// graph (paths/cycles for lattice configurations) whose spectral propagators
// are cached by shape. apply_repeated(ev, m) equals m successive steps but
// costs one application: eigenphases are raised to the m-th power.
class SubspaceEngine {
 public:
  SubspaceEngine(Eigen::VectorXcd initial, double eta);

  void apply(const InteractionEvent& ev) { apply_repeated(ev, 1); }
  void apply_repeated(const InteractionEvent& ev, std::int64_t count);

  const Eigen::VectorXcd& state() const { return state_; }
  int size() const { return static_cast<int>(state_.size()); }
  double eta() const { return eta_; }
  // |.|_2 deviation from 1; spectral applications are unitary to roundoff.
  double norm_error() const;

 private:
  struct ClusterKey {
    int shape;  // 0 path, 1 cycle, 2 generic
    int size;
    std::vector<std::pair<int, int>> edges;  // local indices, generic only
    auto operator<=>(const ClusterKey&) const = default;
  };
  struct Spectral {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd eigenvalues;
  };

  const Spectral& propagator_for(const ClusterKey& key);

  Eigen::VectorXcd state_;
  double eta_;
  std::map<ClusterKey, Spectral> cache_;
  // scratch, to avoid per-step allocation
  std::vector<int> members_;
  Eigen::VectorXcd gathered_, rotated_;
};

// ---- full register -------------------------------------------------------
//
// Computational basis with particle 0 on the most significant bit;
// sigma_z = |0><0| - |1><1|.

Eigen::MatrixXcd pair_term(Coupling coupling);  // 4x4, basis |00>,|01>,|10>,|11>

Eigen::MatrixXcd full_hamiltonian(const InteractionEvent& ev, Coupling coupling,
                                  int n);

// Reference step, dense exponential of the summed Hamiltonian.
Eigen::VectorXcd full_step(const Eigen::VectorXcd& state,
                           const InteractionEvent& ev, Coupling coupling,
                           double eta);

class FullEngine {
 public:
  FullEngine(Eigen::VectorXcd initial, Coupling coupling, double eta);

  void apply(const InteractionEvent& ev) { apply_repeated(ev, 1); }
  void apply_repeated(const InteractionEvent& ev, std::int64_t count);

  const Eigen::VectorXcd& state() const { return state_; }
  int qubits() const { return qubits_; }
  Coupling coupling() const { return coupling_; }
  double eta() const { return eta_; }
  double norm_error() const;

 private:
  void apply_pair_xx(int k, int l, double angle);
  void apply_pair_xxx(int k, int l, double angle);
  void apply_pair_ising(int k, int l, double angle);

  struct Spectral {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd eigenvalues;
  };
  const Spectral& propagator_for(const InteractionEvent& ev);

  Eigen::VectorXcd state_;
  Eigen::VectorXcd scratch_;
  Coupling coupling_;
  double eta_;
  int qubits_;
  std::map<std::vector<std::pair<int, int>>, Spectral> cache_;
};

// |k> in the subspace -> the full-register basis state with bit k set.
Eigen::VectorXcd embed_subspace(const Eigen::VectorXcd& sub);

// Projection of a full state onto the single-excitation subspace plus the
// leaked weight 1 - |projection|^2.
std::pair<Eigen::VectorXcd, double> project_subspace(
    const Eigen::VectorXcd& full);

// (even, odd) Hamming-weight populations of a full state.
std::pair<double, double> parity_populations(const Eigen::VectorXcd& full);

// Reduced 4x4 density matrix of qubits (k, l) of a pure full state, without
// forming the 2^n x 2^n density matrix.
Eigen::MatrixXcd reduced_pair_from_state(const Eigen::VectorXcd& full, int k,
                                         int l);

}  // namespace spingas
