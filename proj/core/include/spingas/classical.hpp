#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spingas/rng.hpp"

namespace spingas {

// Which particle pairs interact during one quantum step. Pairs are
// normalized: first < second, sorted ascending, no duplicates. Particle
// indices are 0-based in code (1-based only in external text formats).
struct InteractionEvent {
  std::int64_t step = 0;
  std::vector<std::pair<int, int>> pairs;

  static InteractionEvent make(std::int64_t step,
                               std::vector<std::pair<int, int>> pairs);
};

bool same_pairs(const InteractionEvent& a, const InteractionEvent& b);

// One uniformly random unordered pair out of n(n-1)/2. Consumes one draw.
InteractionEvent random_pairs_step(int n, RngStream& rng, std::int64_t step);

// Static ring: pairs {k, k+1} plus the wrap pair {n-1, 0}. For n = 2 the
// wrap duplicates {0, 1} and is dropped by normalization.
InteractionEvent chain_step(int n, std::int64_t step);

// Hard-core lattice gas on a periodic 1D lattice.
struct LatticeConfiguration {
  int sites = 0;
  std::vector<int> site_of;   // particle -> site
  std::vector<int> occupant;  // site -> particle, -1 if empty

  int particles() const { return static_cast<int>(site_of.size()); }

  // Particles 0..n-1 on sites 0..n-1.
  static LatticeConfiguration block(int n, int sites);
  // Uniform over occupancy sets; particle labels assigned in site order.
  static LatticeConfiguration uniform_random(int n, int sites, RngStream& rng);

  void validate() const;
};

// Pure hop rule: move `particle` by `direction` (+1/-1, periodic) iff the
// target site is empty. Returns whether it moved.
bool lattice_hop(LatticeConfiguration& cfg, int particle, int direction);

// All pairs of particles on adjacent sites of the current configuration.
InteractionEvent lattice_neighbor_pairs(const LatticeConfiguration& cfg,
                                        std::int64_t step);

// One sweep step: a random particle and a random direction are chosen; if
// the target site is empty the particle moves there. The event holds the
// neighbor pairs of the configuration after the hop attempt.
InteractionEvent lattice_gas_step(LatticeConfiguration& cfg, RngStream& rng,
                                  std::int64_t step);

// Source of one InteractionEvent per quantum step.
class EventSource {
 public:
  virtual ~EventSource() = default;
  virtual InteractionEvent next() = 0;
  virtual int particle_count() const = 0;
};

class RandomPairsSource final : public EventSource {
 public:
  RandomPairsSource(int n, RngStream rng) : n_(n), rng_(rng) {}
  InteractionEvent next() override {
    return random_pairs_step(n_, rng_, step_++);
  }
  int particle_count() const override { return n_; }

 private:
  int n_;
  RngStream rng_;
  std::int64_t step_ = 0;
};

class ChainSource final : public EventSource {
 public:
  explicit ChainSource(int n) : n_(n) {}
  InteractionEvent next() override { return chain_step(n_, step_++); }
  int particle_count() const override { return n_; }

 private:
  int n_;
  std::int64_t step_ = 0;
};

class LatticeGasSource final : public EventSource {
 public:
  LatticeGasSource(LatticeConfiguration cfg, RngStream rng)
      : cfg_(std::move(cfg)), rng_(rng) {}
  InteractionEvent next() override {
    return lattice_gas_step(cfg_, rng_, step_++);
  }
  int particle_count() const override { return cfg_.particles(); }
  const LatticeConfiguration& configuration() const { return cfg_; }

 private:
  LatticeConfiguration cfg_;
  RngStream rng_;
  std::int64_t step_ = 0;
};

}  // namespace spingas
