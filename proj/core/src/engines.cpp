#include "spingas/engines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "spingas/errors.hpp"

namespace spingas {

namespace {

void check_pairs_in_range(const InteractionEvent& ev, int n,
                          const char* where) {
  for (const auto& [a, b] : ev.pairs) {
    if (b >= n) {
      throw InvalidInputError(std::string(where) + ": pair (" +
                              std::to_string(a) + "," + std::to_string(b) +
                              ") out of range for n=" + std::to_string(n));
    }
  }
}

Complex phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

// ---- subspace ------------------------------------------------------------

Eigen::MatrixXcd subspace_hamiltonian(const InteractionEvent& ev, int n) {
  if (n < 1) throw InvalidInputError("subspace_hamiltonian: n must be >= 1");
  check_pairs_in_range(ev, n, "subspace_hamiltonian");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [k, l] : ev.pairs) {
    h(k, l) = 2.0;
    h(l, k) = 2.0;
  }
  return h;
}

Eigen::VectorXcd subspace_step(const Eigen::VectorXcd& state,
                               const InteractionEvent& ev, double eta) {
  const int n = static_cast<int>(state.size());
  if (ev.pairs.empty()) return state;
  return unitary_exponential(subspace_hamiltonian(ev, n), eta) * state;
}

SubspaceEngine::SubspaceEngine(Eigen::VectorXcd initial, double eta)
    : state_(std::move(initial)), eta_(eta) {
  if (state_.size() < 1) {
    throw InvalidInputError("subspace engine: empty state");
  }
  if (state_.size() > kSubspaceMaxParticles) {
    throw CapacityError("subspace engine: " + std::to_string(state_.size()) +
                        " particles exceeds dense capacity " +
                        std::to_string(kSubspaceMaxParticles));
  }
  if (!std::isfinite(eta_)) {
    throw InvalidInputError("subspace engine: eta must be finite");
  }
}

double SubspaceEngine::norm_error() const {
  return std::abs(state_.norm() - 1.0);
}

const SubspaceEngine::Spectral& SubspaceEngine::propagator_for(
    const ClusterKey& key) {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(key.size, key.size);
  if (key.shape == 0 || key.shape == 1) {
    for (int i = 0; i + 1 < key.size; ++i) {
      h(i, i + 1) = 2.0;
      h(i + 1, i) = 2.0;
    }
    if (key.shape == 1) {
      h(0, key.size - 1) = 2.0;
      h(key.size - 1, 0) = 2.0;
    }
  } else {
    for (const auto& [a, b] : key.edges) {
      h(a, b) = 2.0;
      h(b, a) = 2.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericError("cluster eigendecomposition failed");
  }
  Spectral sp;
  sp.vectors = solver.eigenvectors().cast<Complex>();
  sp.eigenvalues = solver.eigenvalues();
  return cache_.emplace(key, std::move(sp)).first->second;
}

void SubspaceEngine::apply_repeated(const InteractionEvent& ev,
                                    std::int64_t count) {
  if (count < 0) throw InvalidInputError("apply_repeated: negative count");
  if (count == 0 || ev.pairs.empty()) return;
  const int n = size();
  check_pairs_in_range(ev, n, "subspace engine");

  if (ev.pairs.size() == 1) {
    const auto [k, l] = ev.pairs.front();
    const double a = 2.0 * eta_ * static_cast<double>(count);
    const double c = std::cos(a);
    const Complex ms(0.0, -std::sin(a));
    const Complex u = state_[k];
    const Complex v = state_[l];
    state_[k] = c * u + ms * v;
    state_[l] = ms * u + c * v;
    return;
  }

  // Decompose the interaction graph into connected components. Lattice and
  // chain events produce paths and cycles, which share cached propagators
  // across all particle labelings.
  std::vector<int> involved;
  involved.reserve(2 * ev.pairs.size());
  for (const auto& [a, b] : ev.pairs) {
    involved.push_back(a);
    involved.push_back(b);
  }
  std::sort(involved.begin(), involved.end());
  involved.erase(std::unique(involved.begin(), involved.end()),
                 involved.end());

  const int m = static_cast<int>(involved.size());
  const auto local_of = [&](int particle) {
    return static_cast<int>(
        std::lower_bound(involved.begin(), involved.end(), particle) -
        involved.begin());
  };

  std::vector<std::vector<int>> adj(m);
  for (const auto& [a, b] : ev.pairs) {
    const int la = local_of(a);
    const int lb = local_of(b);
    adj[la].push_back(lb);
    adj[lb].push_back(la);
  }
  for (auto& neighbors : adj) std::sort(neighbors.begin(), neighbors.end());

  std::vector<char> visited(m, 0);
  std::vector<int> component;
  for (int start = 0; start < m; ++start) {
    if (visited[start]) continue;
    component.clear();
    component.push_back(start);
    visited[start] = 1;
    for (std::size_t q = 0; q < component.size(); ++q) {
      for (const int nb : adj[component[q]]) {
        if (!visited[nb]) {
          visited[nb] = 1;
          component.push_back(nb);
        }
      }
    }
    std::sort(component.begin(), component.end());

    const int cs = static_cast<int>(component.size());
    int max_degree = 0;
    std::vector<int> endpoints;
    for (const int v : component) {
      const int deg = static_cast<int>(adj[v].size());
      max_degree = std::max(max_degree, deg);
      if (deg == 1) endpoints.push_back(v);
    }

    ClusterKey key;
    members_.clear();
    if (max_degree <= 2 && endpoints.size() == 2) {
      key = {0, cs, {}};
      // walk the path from the smaller endpoint
      int prev = -1;
      int cur = std::min(endpoints[0], endpoints[1]);
      while (static_cast<int>(members_.size()) < cs) {
        members_.push_back(involved[cur]);
        int nxt = -1;
        for (const int nb : adj[cur]) {
          if (nb != prev) {
            nxt = nb;
            break;
          }
        }
        prev = cur;
        cur = nxt;
        if (cur == -1) break;
      }
    } else if (max_degree == 2 && endpoints.empty()) {
      key = {1, cs, {}};
      // walk the cycle from the smallest vertex toward its smaller neighbor
      int prev = component.front();
      int cur = adj[prev].front();
      members_.push_back(involved[prev]);
      while (static_cast<int>(members_.size()) < cs) {
        members_.push_back(involved[cur]);
        const int next =
            (adj[cur][0] == prev) ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
      }
    } else {
      key.shape = 2;
      key.size = cs;
      // local indices relative to the sorted component
      const auto comp_local = [&](int v) {
        return static_cast<int>(
            std::lower_bound(component.begin(), component.end(), v) -
            component.begin());
      };
      for (const auto& [a, b] : ev.pairs) {
        const int la = local_of(a);
        const int lb = local_of(b);
        if (std::binary_search(component.begin(), component.end(), la)) {
          int x = comp_local(la);
          int y = comp_local(lb);
          if (x > y) std::swap(x, y);
          key.edges.emplace_back(x, y);
        }
      }
      std::sort(key.edges.begin(), key.edges.end());
      for (const int v : component) members_.push_back(involved[v]);
    }

    const Spectral& sp = propagator_for(key);
    gathered_.resize(cs);
    for (int i = 0; i < cs; ++i) gathered_[i] = state_[members_[i]];
    rotated_.noalias() = sp.vectors.adjoint() * gathered_;
    const double a = eta_ * static_cast<double>(count);
    for (int i = 0; i < cs; ++i) {
      rotated_[i] *= phase(-a * sp.eigenvalues[i]);
    }
    gathered_.noalias() = sp.vectors * rotated_;
    for (int i = 0; i < cs; ++i) state_[members_[i]] = gathered_[i];
  }
}

// ---- full register ---------------------------------------------------------

Eigen::MatrixXcd pair_term(Coupling coupling) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(4, 4);
  switch (coupling) {
    case Coupling::XX:
      t(1, 2) = t(2, 1) = 2.0;
      break;
    case Coupling::XXX:
      t(1, 2) = t(2, 1) = 2.0;
      t(0, 0) = t(3, 3) = 1.0;
      t(1, 1) = t(2, 2) = -1.0;
      break;
    case Coupling::Ising:
      t(0, 3) = t(3, 0) = 1.0;
      t(1, 2) = t(2, 1) = 1.0;
      break;
  }
  return t;
}

Eigen::MatrixXcd full_hamiltonian(const InteractionEvent& ev,
                                  Coupling coupling, int n) {
  if (n < 1 || n > kFullStateMaxQubits) {
    throw CapacityError("full_hamiltonian: n=" + std::to_string(n) +
                        " outside dense capacity");
  }
  check_pairs_in_range(ev, n, "full_hamiltonian");
  const std::uint64_t dim = 1ull << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [k, l] : ev.pairs) {
    const std::uint64_t mk = 1ull << (n - 1 - k);
    const std::uint64_t ml = 1ull << (n - 1 - l);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
      const bool a = idx & mk;
      const bool b = idx & ml;
      switch (coupling) {
        case Coupling::XX:
          if (a != b) h(idx, idx ^ mk ^ ml) += 2.0;
          break;
        case Coupling::XXX:
          if (a != b) {
            h(idx, idx ^ mk ^ ml) += 2.0;
            h(idx, idx) += -1.0;
          } else {
            h(idx, idx) += 1.0;
          }
          break;
        case Coupling::Ising:
          h(idx, idx ^ mk ^ ml) += 1.0;
          break;
      }
    }
  }
  return h;
}

Eigen::VectorXcd full_step(const Eigen::VectorXcd& state,
                           const InteractionEvent& ev, Coupling coupling,
                           double eta) {
  if (ev.pairs.empty()) return state;
  const int n = qubit_count_for_dim(state.size());
  return unitary_exponential(full_hamiltonian(ev, coupling, n), eta) * state;
}

FullEngine::FullEngine(Eigen::VectorXcd initial, Coupling coupling, double eta)
    : state_(std::move(initial)), coupling_(coupling), eta_(eta) {
  qubits_ = qubit_count_for_dim(state_.size());
  if (qubits_ > kFullStateMaxQubits) {
    throw CapacityError("full engine: " + std::to_string(qubits_) +
                        " qubits exceeds dense capacity " +
                        std::to_string(kFullStateMaxQubits));
  }
  if (!std::isfinite(eta_)) {
    throw InvalidInputError("full engine: eta must be finite");
  }
}

double FullEngine::norm_error() const { return std::abs(state_.norm() - 1.0); }

void FullEngine::apply_pair_xx(int k, int l, double angle) {
  const std::uint64_t mk = 1ull << (qubits_ - 1 - k);
  const std::uint64_t ml = 1ull << (qubits_ - 1 - l);
  const std::uint64_t dim = 1ull << qubits_;
  const double c = std::cos(2.0 * angle);
  const Complex ms(0.0, -std::sin(2.0 * angle));
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if ((idx & mk) && !(idx & ml)) {
      const std::uint64_t partner = idx ^ mk ^ ml;
      const Complex u = state_[idx];
      const Complex v = state_[partner];
      state_[idx] = c * u + ms * v;
      state_[partner] = ms * u + c * v;
    }
  }
}

void FullEngine::apply_pair_xxx(int k, int l, double angle) {
  const std::uint64_t mk = 1ull << (qubits_ - 1 - k);
  const std::uint64_t ml = 1ull << (qubits_ - 1 - l);
  const std::uint64_t dim = 1ull << qubits_;
  // Pair block of H is [-1, 2; 2, -1] on |01>,|10> and +1 on |00>,|11>:
  // exp(-i angle H) = e^{+i angle} (cos 2a - i sin 2a X) on the odd block,
  // e^{-i angle} on the even block.
  const Complex even = phase(-angle);
  const Complex odd = phase(angle);
  const double c = std::cos(2.0 * angle);
  const Complex ms(0.0, -std::sin(2.0 * angle));
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    const bool a = idx & mk;
    const bool b = idx & ml;
    if (a == b) {
      state_[idx] *= even;
    } else if (a && !b) {
      const std::uint64_t partner = idx ^ mk ^ ml;
      const Complex u = state_[idx];
      const Complex v = state_[partner];
      state_[idx] = odd * (c * u + ms * v);
      state_[partner] = odd * (ms * u + c * v);
    }
  }
}

void FullEngine::apply_pair_ising(int k, int l, double angle) {
  const std::uint64_t mk = 1ull << (qubits_ - 1 - k);
  const std::uint64_t ml = 1ull << (qubits_ - 1 - l);
  const std::uint64_t dim = 1ull << qubits_;
  const double c = std::cos(angle);
  const Complex ms(0.0, -std::sin(angle));
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if (!(idx & mk)) {  // partner has bit k set; each orbit visited once
      const std::uint64_t partner = idx ^ mk ^ ml;
      const Complex u = state_[idx];
      const Complex v = state_[partner];
      state_[idx] = c * u + ms * v;
      state_[partner] = c * v + ms * u;
    }
  }
}

const FullEngine::Spectral& FullEngine::propagator_for(
    const InteractionEvent& ev) {
  auto it = cache_.find(ev.pairs);
  if (it != cache_.end()) return it->second;
  const Eigen::MatrixXcd h = full_hamiltonian(ev, coupling_, qubits_);
  // All couplings produce real symmetric matrices in this basis.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
  if (solver.info() != Eigen::Success) {
    throw NumericError("full propagator eigendecomposition failed");
  }
  Spectral sp;
  sp.vectors = solver.eigenvectors().cast<Complex>();
  sp.eigenvalues = solver.eigenvalues();
  return cache_.emplace(ev.pairs, std::move(sp)).first->second;
}

void FullEngine::apply_repeated(const InteractionEvent& ev,
                                std::int64_t count) {
  if (count < 0) throw InvalidInputError("apply_repeated: negative count");
  if (count == 0 || ev.pairs.empty()) return;
  check_pairs_in_range(ev, qubits_, "full engine");
  const double angle = eta_ * static_cast<double>(count);

  if (coupling_ == Coupling::Ising) {
    // Ising terms commute even on overlapping pairs.
    for (const auto& [k, l] : ev.pairs) apply_pair_ising(k, l, angle);
    return;
  }
  if (ev.pairs.size() == 1) {
    const auto [k, l] = ev.pairs.front();
    if (coupling_ == Coupling::XX) {
      apply_pair_xx(k, l, angle);
    } else {
      apply_pair_xxx(k, l, angle);
    }
    return;
  }

  // Overlapping XX/XXX terms do not commute: exponentiate the summed
  // Hamiltonian (spectrally, cached per event signature).
  const Spectral& sp = propagator_for(ev);
  scratch_.noalias() = sp.vectors.adjoint() * state_;
  for (Eigen::Index i = 0; i < scratch_.size(); ++i) {
    scratch_[i] *= phase(-angle * sp.eigenvalues[i]);
  }
  state_.noalias() = sp.vectors * scratch_;
}

Eigen::VectorXcd embed_subspace(const Eigen::VectorXcd& sub) {
  const int n = static_cast<int>(sub.size());
  if (n < 1 || n > kFullStateMaxQubits) {
    throw CapacityError("embed_subspace: n=" + std::to_string(n) +
                        " outside dense capacity");
  }
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(1ull << n);
  for (int k = 0; k < n; ++k) {
    full[1ull << (n - 1 - k)] = sub[k];
  }
  return full;
}

std::pair<Eigen::VectorXcd, double> project_subspace(
    const Eigen::VectorXcd& full) {
  const int n = qubit_count_for_dim(full.size());
  Eigen::VectorXcd sub(n);
  for (int k = 0; k < n; ++k) {
    sub[k] = full[1ull << (n - 1 - k)];
  }
  return {sub, 1.0 - sub.squaredNorm()};
}

std::pair<double, double> parity_populations(const Eigen::VectorXcd& full) {
  qubit_count_for_dim(full.size());
  double even = 0.0, odd = 0.0;
  for (Eigen::Index idx = 0; idx < full.size(); ++idx) {
    const double w = std::norm(full[idx]);
    if (std::popcount(static_cast<std::uint64_t>(idx)) % 2 == 0) {
      even += w;
    } else {
      odd += w;
    }
  }
  return {even, odd};
}

Eigen::MatrixXcd reduced_pair_from_state(const Eigen::VectorXcd& full, int k,
                                         int l) {
  const int n = qubit_count_for_dim(full.size());
  if (k < 0 || l < 0 || k >= n || l >= n || k == l) {
    throw InvalidInputError("reduced_pair_from_state: bad qubit pair");
  }
  const std::uint64_t mk = 1ull << (n - 1 - k);
  const std::uint64_t ml = 1ull << (n - 1 - l);
  const std::uint64_t dim = 1ull << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  Eigen::Vector4cd v;
  for (std::uint64_t rest = 0; rest < dim; ++rest) {
    if (rest & (mk | ml)) continue;
    v[0] = full[rest];
    v[1] = full[rest | ml];
    v[2] = full[rest | mk];
    v[3] = full[rest | mk | ml];
    rho.noalias() += v * v.adjoint();
  }
  return rho;
}

}  // namespace spingas
