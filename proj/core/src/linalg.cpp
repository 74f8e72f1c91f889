#include "spingas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace spingas {

namespace {

std::string dim_str(const Eigen::MatrixXcd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Clips a would-be probability per the density-matrix policy.
double clip_probability(double x, const char* what) {
  if (x < -kPsdTol) {
    throw NumericError(std::string(what) + ": PSD violation, eigenvalue " +
                       std::to_string(x));
  }
  if (x < 0.0) return 0.0;
  return std::min(x, 1.0);
}

}  // namespace

void check_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError("check_hermitian: matrix is " + dim_str(m));
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    throw NumericError("matrix is not Hermitian, max deviation " +
                       std::to_string(dev));
  }
}

EigenSystem hermitian_eigendecomposition(const Eigen::MatrixXcd& m) {
  check_hermitian(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian eigendecomposition failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& h, double theta) {
  const EigenSystem es = hermitian_eigendecomposition(h);
  const Eigen::Index n = h.rows();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases[i] = std::polar(1.0, -theta * es.eigenvalues[i]);
  }
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

void validate_density(const Eigen::MatrixXcd& rho, double trace_tol) {
  check_hermitian(rho, 1e-10);
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
    throw NumericError("density matrix trace " + std::to_string(tr.real()) +
                       (tr.imag() < 0 ? "-" : "+") +
                       std::to_string(std::abs(tr.imag())) + "i is not 1");
  }
}

int qubit_count_for_dim(Eigen::Index dim) {
  if (dim < 2) throw InvalidInputError("state dimension must be at least 2");
  const auto u = static_cast<std::uint64_t>(dim);
  if ((u & (u - 1)) != 0) {
    throw InvalidInputError("dimension " + std::to_string(dim) +
                            " is not a power of two");
  }
  int n = 0;
  for (std::uint64_t v = u; v > 1; v >>= 1) ++n;
  return n;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho,
                               std::span<const int> keep) {
  if (rho.rows() != rho.cols()) {
    throw InvalidInputError("partial_trace: matrix is " + dim_str(rho));
  }
  const int n = qubit_count_for_dim(rho.rows());
  if (keep.empty()) throw InvalidInputError("partial_trace: empty keep set");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) {
      throw InvalidInputError("partial_trace: qubit " +
                              std::to_string(keep[i]) + " out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw InvalidInputError("partial_trace: keep set must be ascending");
    }
  }

  // Bit of basis index for qubit q (qubit 0 is most significant).
  std::vector<std::uint64_t> keep_bit(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    keep_bit[i] = 1ull << (n - 1 - keep[i]);
  }
  std::vector<std::uint64_t> traced_bit;
  {
    std::size_t ki = 0;
    for (int q = 0; q < n; ++q) {
      if (ki < keep.size() && keep[ki] == q) {
        ++ki;
      } else {
        traced_bit.push_back(1ull << (n - 1 - q));
      }
    }
  }

  const std::uint64_t dk = 1ull << keep.size();
  const std::uint64_t dt = 1ull << traced_bit.size();
  // Scatter a compact index over the given bit positions (first position is
  // the most significant compact bit).
  const auto scatter = [](std::uint64_t compact,
                          const std::vector<std::uint64_t>& bits) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (compact & (1ull << (bits.size() - 1 - i))) out |= bits[i];
    }
    return out;
  };

  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(dk, dk);
  for (std::uint64_t r = 0; r < dk; ++r) {
    const std::uint64_t rbase = scatter(r, keep_bit);
    for (std::uint64_t c = 0; c < dk; ++c) {
      const std::uint64_t cbase = scatter(c, keep_bit);
      Complex sum = 0.0;
      for (std::uint64_t t = 0; t < dt; ++t) {
        const std::uint64_t tbits = scatter(t, traced_bit);
        sum += rho(rbase | tbits, cbase | tbits);
      }
      reduced(r, c) = sum;
    }
  }
  return reduced;
}

double shannon_entropy_bits(std::span<const double> p) {
  double s = 0.0;
  for (const double x : p) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  validate_density(rho);
  const EigenSystem es = hermitian_eigendecomposition(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double p = clip_probability(es.eigenvalues[i], "von_neumann_entropy");
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

double diagonal_shannon_entropy(const Eigen::MatrixXcd& rho) {
  validate_density(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double p =
        clip_probability(rho(i, i).real(), "diagonal_shannon_entropy");
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace spingas
