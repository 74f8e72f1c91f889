#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "spingas/errors.hpp"

namespace spingas {

using Complex = std::complex<double>;

// Hermiticity tolerance on inputs; reconstruction quality of the
// eigendecomposition is checked against 1e-10 * dim in tests.
inline constexpr double kHermitianTol = 1e-12;

// Eigenvalues of a density matrix in [-1e-9, 0) are clipped to zero;
// anything below is a genuine PSD violation.
inline constexpr double kPsdTol = 1e-9;

struct EigenSystem {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // column i pairs with eigenvalues[i]
};

// Throws NumericError if max |m - m^dagger| exceeds tol.
void check_hermitian(const Eigen::MatrixXcd& m, double tol = kHermitianTol);

EigenSystem hermitian_eigendecomposition(const Eigen::MatrixXcd& m);

// exp(-i * theta * h) for Hermitian h, via the eigendecomposition.
Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& h, double theta);

// Hermitian, unit trace (within trace_tol). PSD is checked where eigenvalues
// are computed anyway (entropies, concurrence).
void validate_density(const Eigen::MatrixXcd& rho, double trace_tol = 1e-9);

// Number of qubits for a 2^n-dimensional space; throws on non-powers of two.
int qubit_count_for_dim(Eigen::Index dim);

// Reduced density matrix over the kept qubits. Qubits are 0-based with qubit
// 0 the most significant bit of the basis index; `keep` must be strictly
// ascending. Kept qubits retain their relative order in the reduced basis.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho,
                               std::span<const int> keep);

// Shannon entropy in bits; entries are assumed clipped to [0, 1], 0 log 0 = 0.
double shannon_entropy_bits(std::span<const double> p);

// Von Neumann entropy in bits. Eigenvalues in [-kPsdTol, 0) are treated as
// zero, below that a NumericError is thrown; values are clipped to [0, 1].
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

// Shannon entropy of the diagonal, in bits. Same clipping policy.
double diagonal_shannon_entropy(const Eigen::MatrixXcd& rho);

}  // namespace spingas
