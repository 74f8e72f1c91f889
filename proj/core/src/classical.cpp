#include "spingas/classical.hpp"

#include <algorithm>
#include <string>

#include "spingas/errors.hpp"

namespace spingas {

InteractionEvent InteractionEvent::make(
    std::int64_t step, std::vector<std::pair<int, int>> pairs) {
  for (auto& [a, b] : pairs) {
    if (a == b) {
      throw InvalidInputError("interaction pair with identical particles " +
                              std::to_string(a));
    }
    if (a < 0 || b < 0) {
      throw InvalidInputError("negative particle index in interaction pair");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  InteractionEvent ev;
  ev.step = step;
  ev.pairs = std::move(pairs);
  return ev;
}

bool same_pairs(const InteractionEvent& a, const InteractionEvent& b) {
  return a.pairs == b.pairs;
}

InteractionEvent random_pairs_step(int n, RngStream& rng, std::int64_t step) {
  if (n < 2) throw InvalidInputError("random_pairs_step needs n >= 2");
  const std::uint64_t total =
      static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t r = rng.next_below(total);
  // Unrank: pair (k, l), k < l, in lexicographic order.
  int k = 0;
  std::uint64_t row = static_cast<std::uint64_t>(n - 1);
  while (r >= row) {
    r -= row;
    --row;
    ++k;
  }
  const int l = k + 1 + static_cast<int>(r);
  return InteractionEvent::make(step, {{k, l}});
}

InteractionEvent chain_step(int n, std::int64_t step) {
  if (n < 2) throw InvalidInputError("chain_step needs n >= 2");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n);
  for (int k = 0; k + 1 < n; ++k) pairs.emplace_back(k, k + 1);
  pairs.emplace_back(n - 1, 0);
  return InteractionEvent::make(step, std::move(pairs));
}

LatticeConfiguration LatticeConfiguration::block(int n, int sites) {
  if (n < 1 || sites < n) {
    throw InvalidInputError("lattice needs 1 <= particles <= sites");
  }
  LatticeConfiguration cfg;
  cfg.sites = sites;
  cfg.site_of.resize(n);
  cfg.occupant.assign(sites, -1);
  for (int k = 0; k < n; ++k) {
    cfg.site_of[k] = k;
    cfg.occupant[k] = k;
  }
  return cfg;
}

LatticeConfiguration LatticeConfiguration::uniform_random(int n, int sites,
                                                          RngStream& rng) {
  if (n < 1 || sites < n) {
    throw InvalidInputError("lattice needs 1 <= particles <= sites");
  }
  // Floyd's sampling of n distinct sites, then labels in site order.
  std::vector<int> chosen;
  chosen.reserve(n);
  for (int j = sites - n; j < sites; ++j) {
    const int t = static_cast<int>(rng.next_below(j + 1));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  LatticeConfiguration cfg;
  cfg.sites = sites;
  cfg.site_of.resize(n);
  cfg.occupant.assign(sites, -1);
  for (int k = 0; k < n; ++k) {
    cfg.site_of[k] = chosen[k];
    cfg.occupant[chosen[k]] = k;
  }
  return cfg;
}

void LatticeConfiguration::validate() const {
  if (sites < 1 || site_of.empty() ||
      static_cast<int>(site_of.size()) > sites) {
    throw InvalidInputError("lattice configuration sizes are inconsistent");
  }
  if (static_cast<int>(occupant.size()) != sites) {
    throw InvalidInputError("occupant table does not match site count");
  }
  for (int k = 0; k < particles(); ++k) {
    const int s = site_of[k];
    if (s < 0 || s >= sites || occupant[s] != k) {
      throw InvalidInputError("occupancy tables disagree at particle " +
                              std::to_string(k));
    }
  }
  int occupied = 0;
  for (const int p : occupant) {
    if (p != -1) ++occupied;
  }
  if (occupied != particles()) {
    throw InvalidInputError("occupant table has stray entries");
  }
}

bool lattice_hop(LatticeConfiguration& cfg, int particle, int direction) {
  if (particle < 0 || particle >= cfg.particles()) {
    throw InvalidInputError("lattice_hop: bad particle index");
  }
  if (direction != 1 && direction != -1) {
    throw InvalidInputError("lattice_hop: direction must be +1 or -1");
  }
  const int from = cfg.site_of[particle];
  const int to = (from + direction + cfg.sites) % cfg.sites;
  if (cfg.occupant[to] != -1) return false;
  cfg.occupant[from] = -1;
  cfg.occupant[to] = particle;
  cfg.site_of[particle] = to;
  return true;
}

InteractionEvent lattice_neighbor_pairs(const LatticeConfiguration& cfg,
                                        std::int64_t step) {
  std::vector<std::pair<int, int>> pairs;
  if (cfg.sites < 2) return InteractionEvent::make(step, std::move(pairs));
  for (int s = 0; s < cfg.sites; ++s) {
    const int a = cfg.occupant[s];
    const int b = cfg.occupant[(s + 1) % cfg.sites];
    if (a != -1 && b != -1) pairs.emplace_back(a, b);
  }
  // A 2-site ring would list the same pair twice; make() dedupes.
  return InteractionEvent::make(step, std::move(pairs));
}

InteractionEvent lattice_gas_step(LatticeConfiguration& cfg, RngStream& rng,
                                  std::int64_t step) {
  const int particle = static_cast<int>(rng.next_below(cfg.particles()));
  const int direction = rng.next_below(2) == 0 ? -1 : 1;
  lattice_hop(cfg, particle, direction);
  return lattice_neighbor_pairs(cfg, step);
}

}  // namespace spingas
