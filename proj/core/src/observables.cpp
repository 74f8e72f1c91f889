#include "spingas/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spingas/engines.hpp"
#include "spingas/errors.hpp"

namespace spingas {

Eigen::VectorXd single_particle_probs(const Eigen::VectorXcd& subspace_state) {
  return subspace_state.cwiseAbs2();
}

Eigen::VectorXd single_particle_probs(const Eigen::MatrixXcd& rho_subspace) {
  if (rho_subspace.rows() != rho_subspace.cols()) {
    throw InvalidInputError("single_particle_probs: matrix is not square");
  }
  return rho_subspace.diagonal().real();
}

Eigen::VectorXd single_particle_probs_full(const Eigen::VectorXcd& full) {
  const int n = qubit_count_for_dim(full.size());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (Eigen::Index idx = 0; idx < full.size(); ++idx) {
    const double w = std::norm(full[idx]);
    if (w == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      if (idx & (1ll << (n - 1 - k))) p[k] += w;
    }
  }
  return p;
}

Eigen::VectorXd single_particle_probs_full(const Eigen::MatrixXcd& rho_full) {
  const int n = qubit_count_for_dim(rho_full.rows());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (Eigen::Index idx = 0; idx < rho_full.rows(); ++idx) {
    const double w = rho_full(idx, idx).real();
    for (int k = 0; k < n; ++k) {
      if (idx & (1ll << (n - 1 - k))) p[k] += w;
    }
  }
  return p;
}

double inhomogeneity(const Eigen::VectorXd& p) {
  const auto n = static_cast<double>(p.size());
  if (p.size() == 0) throw InvalidInputError("inhomogeneity: empty vector");
  const double mean = p.mean();
  return p.squaredNorm() / n - mean * mean;
}

double wootters_concurrence(const Eigen::MatrixXcd& rho2) {
  if (rho2.rows() != 4 || rho2.cols() != 4) {
    throw InvalidInputError("wootters_concurrence expects a 4x4 matrix");
  }
  validate_density(rho2, 1e-6);

  // sy x sy is real: antidiag(-1, 1, 1, -1).
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = flip(3, 0) = -1.0;
  flip(1, 2) = flip(2, 1) = 1.0;
  const Eigen::Matrix4cd product = rho2 * flip * rho2.conjugate() * flip;

  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(product, false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("wootters_concurrence: eigensolver failed");
  }
  std::array<double, 4> lam{};
  double max_lam = 0.0;
  for (int i = 0; i < 4; ++i) {
    lam[i] = solver.eigenvalues()[i].real();
    max_lam = std::max(max_lam, std::abs(lam[i]));
  }
  for (double& l : lam) {
    if (l < -1e-10) {
      throw NumericError(
          "wootters_concurrence: negative eigenvalue of rho rho~: " +
          std::to_string(l));
    }
    // Rank-deficient products carry O(eps) eigen noise that sqrt would
    // inflate to ~1e-8; zero anything at relative noise level.
    if (l < 1e-14 * max_lam || l < 0.0) l = 0.0;
    l = std::sqrt(l);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double subspace_concurrence(const Eigen::MatrixXcd& rho_subspace, int k,
                            int l) {
  if (k < 0 || l < 0 || k >= rho_subspace.rows() || l >= rho_subspace.cols() ||
      k == l) {
    throw InvalidInputError("subspace_concurrence: bad pair (" +
                            std::to_string(k) + "," + std::to_string(l) + ")");
  }
  return 2.0 * std::abs(rho_subspace(k, l));
}

double subspace_concurrence(const Eigen::VectorXcd& subspace_state, int k,
                            int l) {
  if (k < 0 || l < 0 || k >= subspace_state.size() ||
      l >= subspace_state.size() || k == l) {
    throw InvalidInputError("subspace_concurrence: bad pair");
  }
  return 2.0 * std::abs(subspace_state[k]) * std::abs(subspace_state[l]);
}

double total_concurrence(const Eigen::VectorXcd& subspace_state) {
  // sum_{k<l} 2 |a_k||a_l| = (sum |a_k|)^2 - sum |a_k|^2
  double s1 = 0.0, s2 = 0.0;
  for (Eigen::Index k = 0; k < subspace_state.size(); ++k) {
    const double a = std::abs(subspace_state[k]);
    s1 += a;
    s2 += a * a;
  }
  return s1 * s1 - s2;
}

double total_concurrence(const Eigen::MatrixXcd& rho_subspace) {
  if (rho_subspace.rows() != rho_subspace.cols()) {
    throw InvalidInputError("total_concurrence: matrix is not square");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rho_subspace.rows(); ++k) {
    for (Eigen::Index l = k + 1; l < rho_subspace.cols(); ++l) {
      sum += 2.0 * std::abs(rho_subspace(k, l));
    }
  }
  return sum;
}

double total_pairwise_concurrence_full(const Eigen::VectorXcd& full) {
  const int n = qubit_count_for_dim(full.size());
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      sum += wootters_concurrence(reduced_pair_from_state(full, k, l));
    }
  }
  return sum;
}

Eigen::MatrixXd concurrence_table(const Eigen::MatrixXcd& rho_subspace) {
  const Eigen::Index n = rho_subspace.rows();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const double c = 2.0 * std::abs(rho_subspace(k, l));
      table(k, l) = c;
      table(l, k) = c;
    }
  }
  return table;
}

Eigen::MatrixXd concurrence_table_full(const Eigen::MatrixXcd& rho_full) {
  const int n = qubit_count_for_dim(rho_full.rows());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const std::array<int, 2> keep{k, l};
      const double c = wootters_concurrence(partial_trace(rho_full, keep));
      table(k, l) = c;
      table(l, k) = c;
    }
  }
  return table;
}

double stationary_entropy_prediction(Complex c0, Complex c1, int n) {
  if (n < 1) throw InvalidInputError("stationary_entropy_prediction: n >= 1");
  const double w0 = std::norm(c0);
  const double w1 = std::norm(c1);
  if (std::abs(w0 + w1 - 1.0) > 1e-10) {
    throw InvalidInputError(
        "stationary_entropy_prediction: amplitudes are not normalized");
  }
  std::vector<double> p;
  p.reserve(n + 1);
  p.push_back(w0);
  for (int i = 0; i < n; ++i) p.push_back(w1 / n);
  return shannon_entropy_bits(p);
}

}  // namespace spingas
