#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "spingas/classical.hpp"
#include "spingas/errors.hpp"

using namespace spingas;

TEST_CASE("event normalization") {
  const InteractionEvent ev =
      InteractionEvent::make(3, {{5, 2}, {1, 0}, {2, 5}});
  CHECK(ev.step == 3);
  REQUIRE(ev.pairs.size() == 2);  // duplicate (2,5) collapsed
  CHECK(ev.pairs[0] == std::pair<int, int>(0, 1));
  CHECK(ev.pairs[1] == std::pair<int, int>(2, 5));

  CHECK_THROWS_AS(InteractionEvent::make(0, {{4, 4}}), InvalidInputError);
  CHECK_THROWS_AS(InteractionEvent::make(0, {{-1, 2}}), InvalidInputError);

  CHECK(same_pairs(ev, InteractionEvent::make(9, {{0, 1}, {5, 2}})));
  CHECK_FALSE(same_pairs(ev, InteractionEvent::make(3, {{0, 1}})));
}

TEST_CASE("random pairs cover all unordered pairs uniformly") {
  RngStream rng(11, 0);
  SUBCASE("n=2 always yields the only pair") {
    for (int i = 0; i < 50; ++i) {
      const InteractionEvent ev = random_pairs_step(2, rng, i);
      REQUIRE(ev.pairs.size() == 1);
      CHECK(ev.pairs[0] == std::pair<int, int>(0, 1));
    }
  }
  SUBCASE("n=5 chi-square over the 10 pairs") {
    std::map<std::pair<int, int>, int> count;
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
      const InteractionEvent ev = random_pairs_step(5, rng, i);
      REQUIRE(ev.pairs.size() == 1);
      ++count[ev.pairs[0]];
    }
    CHECK(count.size() == 10);
    const double expected = kDraws / 10.0;
    double chi2 = 0.0;
    for (const auto& [pair, c] : count) {
      chi2 += (c - expected) * (c - expected) / expected;
    }
    CHECK(chi2 < 27.88);  // chi-square(9), p = 0.001
  }
  SUBCASE("n<2 is rejected") {
    CHECK_THROWS_AS(random_pairs_step(1, rng, 0), InvalidInputError);
  }
}

TEST_CASE("chain step pairs every ring bond") {
  const InteractionEvent ev4 = chain_step(4, 0);
  const std::vector<std::pair<int, int>> want = {
      {0, 1}, {0, 3}, {1, 2}, {2, 3}};
  CHECK(ev4.pairs == want);

  // n=2: the wrap-around bond duplicates (0,1); exactly one pair remains.
  const InteractionEvent ev2 = chain_step(2, 0);
  REQUIRE(ev2.pairs.size() == 1);
  CHECK(ev2.pairs[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("lattice configurations validate and initialize") {
  const LatticeConfiguration block = LatticeConfiguration::block(3, 7);
  CHECK_NOTHROW(block.validate());
  CHECK(block.site_of == std::vector<int>({0, 1, 2}));

  RngStream rng(17, 0);
  for (int i = 0; i < 200; ++i) {
    const LatticeConfiguration cfg =
        LatticeConfiguration::uniform_random(4, 9, rng);
    CHECK_NOTHROW(cfg.validate());
    // Labels are assigned in site order.
    CHECK(std::is_sorted(cfg.site_of.begin(), cfg.site_of.end()));
  }
}

TEST_CASE("uniform_random draws occupancy sets uniformly") {
  RngStream rng(23, 0);
  std::map<std::vector<int>, int> count;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    count[LatticeConfiguration::uniform_random(3, 6, rng).site_of]++;
  }
  CHECK(count.size() == 20);  // C(6,3)
  const double expected = kDraws / 20.0;
  double chi2 = 0.0;
  for (const auto& [sites, c] : count) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  CHECK(chi2 < 43.82);  // chi-square(19), p = 0.001
}

TEST_CASE("hop rule: move iff the target site is free, periodic") {
  LatticeConfiguration cfg = LatticeConfiguration::block(1, 4);
  CHECK(lattice_hop(cfg, 0, +1));
  CHECK(cfg.site_of[0] == 1);
  CHECK(lattice_hop(cfg, 0, -1));
  CHECK(cfg.site_of[0] == 0);
  CHECK(lattice_hop(cfg, 0, -1));  // wraps to the last site
  CHECK(cfg.site_of[0] == 3);
  CHECK_NOTHROW(cfg.validate());

  LatticeConfiguration two = LatticeConfiguration::block(2, 4);
  CHECK_FALSE(lattice_hop(two, 0, +1));  // blocked by particle 1
  CHECK(two.site_of == std::vector<int>({0, 1}));
  CHECK(lattice_hop(two, 1, +1));
  CHECK(two.site_of == std::vector<int>({0, 2}));
}

TEST_CASE("neighbor pairs come from site adjacency after the hop") {
  LatticeConfiguration cfg = LatticeConfiguration::block(3, 3);
  // Full ring of 3: bonds (0,1), (1,2), (2,0) by site; particles = sites.
  const InteractionEvent ev = lattice_neighbor_pairs(cfg, 0);
  const std::vector<std::pair<int, int>> want = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(ev.pairs == want);

  LatticeConfiguration sparse = LatticeConfiguration::block(2, 5);
  CHECK(lattice_neighbor_pairs(sparse, 0).pairs ==
        std::vector<std::pair<int, int>>({{0, 1}}));
  REQUIRE(lattice_hop(sparse, 1, +1));
  CHECK(lattice_neighbor_pairs(sparse, 0).pairs.empty());
}

TEST_CASE("lattice gas stationary distribution is uniform over occupancies") {
  // N=2, L=4: six occupancy sets; the chain is doubly stochastic, so the
  // stationary law is uniform. Thinned samples to tame autocorrelation.
  LatticeConfiguration cfg = LatticeConfiguration::block(2, 4);
  RngStream rng(29, 0);
  for (int burn = 0; burn < 1000; ++burn) lattice_gas_step(cfg, rng, burn);

  std::map<std::vector<int>, int> count;
  constexpr int kSamples = 4000;
  constexpr int kThin = 25;
  for (int i = 0; i < kSamples; ++i) {
    for (int j = 0; j < kThin; ++j) lattice_gas_step(cfg, rng, i);
    std::vector<int> occ = cfg.site_of;
    std::sort(occ.begin(), occ.end());
    ++count[occ];
  }
  CHECK(count.size() == 6);
  const double expected = double(kSamples) / 6.0;
  double chi2 = 0.0;
  for (const auto& [occ, c] : count) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  CHECK(chi2 < 20.52);  // chi-square(5), p = 0.001
}

TEST_CASE("single-particle move probability is 1/(2N) per direction") {
  // N=2, L=6 with particles far apart: each of the 4 (particle, direction)
  // draws moves someone, each with probability 1/4.
  RngStream rng(31, 0);
  constexpr int kSteps = 40000;
  int moved[2] = {0, 0};
  LatticeConfiguration cfg = LatticeConfiguration::block(2, 6);
  REQUIRE(lattice_hop(cfg, 1, +1));
  REQUIRE(lattice_hop(cfg, 1, +1));  // sites {0, 3}: all hops free
  for (int i = 0; i < kSteps; ++i) {
    const LatticeConfiguration before = cfg;
    lattice_gas_step(cfg, rng, i);
    for (int p = 0; p < 2; ++p) {
      if (before.site_of[p] != cfg.site_of[p]) ++moved[p];
    }
    cfg = before;  // reset so every step sees the same geometry
  }
  // Each particle moves with probability 1/2 (either direction is free).
  CHECK(moved[0] == doctest::Approx(kSteps / 2.0).epsilon(0.02));
  CHECK(moved[1] == doctest::Approx(kSteps / 2.0).epsilon(0.02));
}

TEST_CASE("event sources are deterministic given the stream key") {
  LatticeGasSource a(LatticeConfiguration::block(3, 6), RngStream(7, 5));
  LatticeGasSource b(LatticeConfiguration::block(3, 6), RngStream(7, 5));
  for (int i = 0; i < 500; ++i) {
    const InteractionEvent ea = a.next();
    const InteractionEvent eb = b.next();
    CHECK(ea.step == eb.step);
    CHECK(ea.pairs == eb.pairs);
  }
}
