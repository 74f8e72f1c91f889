#pragma once

#include <Eigen/Dense>

#include "spingas/linalg.hpp"

namespace spingas {

// Excitation probabilities p_k = |a_k|^2 of a subspace state.
Eigen::VectorXd single_particle_probs(const Eigen::VectorXcd& subspace_state);

// Same from an ensemble density matrix in the subspace basis (the diagonal).
Eigen::VectorXd single_particle_probs(const Eigen::MatrixXcd& rho_subspace);

// p_k of a full-register pure state: weight of basis states with bit k set.
Eigen::VectorXd single_particle_probs_full(const Eigen::VectorXcd& full);

// Same from a full-register density matrix diagonal.
Eigen::VectorXd single_particle_probs_full(const Eigen::MatrixXcd& rho_full);

// Population variance of p: <p^2> - <p>^2, divided by N (not N-1). For the
// localized distribution (1, 0, ..., 0) over N = 100 this is 0.0099.
double inhomogeneity(const Eigen::VectorXd& p);

// Wootters concurrence of a two-qubit density matrix:
// C = max(0, l1 - l2 - l3 - l4), l_i the descending square roots of the
// eigenvalues of rho * (sy x sy) rho^* (sy x sy).
double wootters_concurrence(const Eigen::MatrixXcd& rho2);

// Pairwise concurrence inside the single-excitation subspace: 2 |rho_{kl}|.
double subspace_concurrence(const Eigen::MatrixXcd& rho_subspace, int k,
                            int l);
double subspace_concurrence(const Eigen::VectorXcd& subspace_state, int k,
                            int l);

// Net concurrence: sum over unordered pairs of the pairwise concurrences.
// For a uniform superposition over N particles this is N - 1.
double total_concurrence(const Eigen::VectorXcd& subspace_state);
double total_concurrence(const Eigen::MatrixXcd& rho_subspace);

// Net pairwise Wootters concurrence of a full-register pure state; reduces
// to total_concurrence on subspace states.
double total_pairwise_concurrence_full(const Eigen::VectorXcd& full);

// Symmetric per-pair concurrence table, zero diagonal.
Eigen::MatrixXd concurrence_table(const Eigen::MatrixXcd& rho_subspace);
Eigen::MatrixXd concurrence_table_full(const Eigen::MatrixXcd& rho_full);

// Stationary ensemble entropy of the randomized superposition
// c0|vacuum> + c1|one excitation>: H(|c0|^2, |c1|^2/n, ..., |c1|^2/n)
// with n equal entries. Requires |c0|^2 + |c1|^2 = 1 within 1e-10.
double stationary_entropy_prediction(Complex c0, Complex c1, int n);

}  // namespace spingas
