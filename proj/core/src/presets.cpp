#include "spingas/presets.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "spingas/errors.hpp"

namespace spingas {

namespace {

// Evolution horizons. The homogenization runs follow the plotted 2e4 steps;
// the ensemble horizons are the shortest that reach the stationary regime
// with margin (the vacancy-starved P3 mixes much more slowly).
constexpr std::int64_t kHomogHorizon = 20000;
constexpr std::int64_t kChainHorizon = 300;
constexpr std::int64_t kChainObsHorizon = 2000;
constexpr std::int64_t kP1Horizon = 1500;
constexpr std::int64_t kP2Horizon = 3000;
constexpr std::int64_t kP3Horizon = 16000;
constexpr std::int64_t kP4Horizon = 6000;
constexpr std::int64_t kRhoHomogHorizon = 3000;
constexpr std::int64_t kIsingHorizon = 3000;
constexpr std::int64_t kSuperpositionHorizon = 3000;
constexpr int kEnsembleTraj = 3000;

RunConfig random_pairs(int n, double eta, std::int64_t steps,
                       std::uint64_t seed) {
  RunConfig cfg;
  cfg.plan.model.kind = ModelSpec::Kind::RandomPairs;
  cfg.plan.model.particles = n;
  cfg.plan.eta = eta;
  cfg.plan.steps = steps;
  cfg.plan.seed = seed;
  return cfg;
}

RunConfig lattice_gas(int n, int sites, double eta, std::int64_t steps,
                      ModelSpec::LatticeInit init) {
  RunConfig cfg;
  cfg.plan.model.kind = ModelSpec::Kind::LatticeGas;
  cfg.plan.model.particles = n;
  cfg.plan.model.sites = sites;
  cfg.plan.model.lattice_init = init;
  cfg.plan.eta = eta;
  cfg.plan.steps = steps;
  return cfg;
}

RunConfig billiard(std::uint64_t seed) {
  RunConfig cfg;
  cfg.plan.model.kind = ModelSpec::Kind::Billiard;
  cfg.plan.model.particles = 100;
  cfg.plan.model.diameter = 1.0;
  cfg.plan.model.mass = 1.0;
  cfg.plan.model.velocity_sigma = 0.32;
  cfg.plan.model.box = Eigen::Vector3d::Constant(150.0);
  cfg.plan.eta = 0.1;
  cfg.plan.steps = kHomogHorizon;
  cfg.plan.seed = seed;
  return cfg;
}

void make_ensemble(RunConfig& cfg) { cfg.plan.n_traj = kEnsembleTraj; }

void ising_initial(RunConfig& cfg, int n) {
  cfg.plan.coupling = Coupling::Ising;
  cfg.plan.engine = EngineKind::Full;
  cfg.plan.initial_state.kind = InitialStateSpec::Kind::Computational;
  cfg.plan.initial_state.bits = "1" + std::string(n - 1, '0');
}

RunConfig ising_gas(int n, int sites) {
  RunConfig cfg = lattice_gas(n, sites, 1.0, kIsingHorizon,
                              ModelSpec::LatticeInit::UniformRandom);
  ising_initial(cfg, n);
  make_ensemble(cfg);
  return cfg;
}

struct PresetDef {
  std::string params;
  std::function<RunConfig()> build;
};

const std::map<std::string, PresetDef>& registry() {
  static const std::map<std::string, PresetDef> defs = [] {
    std::map<std::string, PresetDef> r;

    r["fig1-A"] = {
        "random pairwise interactions, 100 particles, eta=0.1, T=20000",
        [] { return random_pairs(100, 0.1, kHomogHorizon, 1); }};
    r["fig1-B"] = {
        "lattice gas, 100 particles, 150 sites, eta=0.1, T=20000",
        [] {
          return lattice_gas(100, 150, 0.1, kHomogHorizon,
                             ModelSpec::LatticeInit::Block);
        }};
    r["fig1-C"] = {
        "lattice gas, 100 particles, 200 sites, eta=0.1, T=20000",
        [] {
          return lattice_gas(100, 200, 0.1, kHomogHorizon,
                             ModelSpec::LatticeInit::Block);
        }};

    r["fig2-chain"] = {
        "XX ring chain, 100 qubits, initial excitation on particle 50, "
        "eta=0.1, T=300",
        [] {
          RunConfig cfg;
          cfg.plan.model.kind = ModelSpec::Kind::Chain;
          cfg.plan.model.particles = 100;
          cfg.plan.eta = 0.1;
          cfg.plan.steps = kChainHorizon;
          cfg.plan.initial_state.excited = 49;
          return cfg;
        }};
    r["fig3-chain-obs"] = {
        "XX ring chain observables, 100 qubits, initial excitation on "
        "particle 50, eta=0.1, T=2000",
        [] {
          RunConfig cfg;
          cfg.plan.model.kind = ModelSpec::Kind::Chain;
          cfg.plan.model.particles = 100;
          cfg.plan.eta = 0.1;
          cfg.plan.steps = kChainObsHorizon;
          cfg.plan.initial_state.excited = 49;
          return cfg;
        }};
    r["fig4-lattice-prop"] = {
        "lattice gas propagation, 100 particles, 150 sites, initial "
        "excitation on particle 50, eta=0.1, T=20000",
        [] {
          RunConfig cfg = lattice_gas(100, 150, 0.1, kHomogHorizon,
                                      ModelSpec::LatticeInit::Block);
          cfg.plan.initial_state.excited = 49;
          return cfg;
        }};

    r["figBB-A"] = {"billiard collision sequence, seed 1",
                    [] { return billiard(1); }};
    r["figBB-B"] = {"billiard collision sequence, seed 2",
                    [] { return billiard(2); }};
    r["figBB-C"] = {"random collision control, 100 particles, eta=0.1, "
                    "T=20000, seed 1",
                    [] { return random_pairs(100, 0.1, kHomogHorizon, 1); }};
    r["figBB-D"] = {"random collision control, 100 particles, eta=0.1, "
                    "T=20000, seed 2",
                    [] { return random_pairs(100, 0.1, kHomogHorizon, 2); }};

    const auto vacancy_ensemble = [](int n, int sites, std::int64_t steps) {
      RunConfig cfg = lattice_gas(n, sites, 1.0, steps,
                                  ModelSpec::LatticeInit::Block);
      make_ensemble(cfg);
      return cfg;
    };
    r["fig5-P1"] = {"8 particles, 16 sites, eta=1.0, 3000 trajectories, "
                    "T=1500",
                    [=] { return vacancy_ensemble(8, 16, kP1Horizon); }};
    r["fig5-P2"] = {"16 particles, 20 sites, eta=1.0, 3000 trajectories, "
                    "T=3000",
                    [=] { return vacancy_ensemble(16, 20, kP2Horizon); }};
    r["fig5-P3"] = {"32 particles, 33 sites, eta=1.0, 3000 trajectories, "
                    "T=16000 (single vacancy, slow mixing)",
                    [=] { return vacancy_ensemble(32, 33, kP3Horizon); }};
    r["fig5-P4"] = {"32 particles, 40 sites, eta=1.0, 3000 trajectories, "
                    "T=6000",
                    [=] { return vacancy_ensemble(32, 40, kP4Horizon); }};

    const char* cbar_note = " (averaged net concurrence focus)";
    r["figCbar-P1"] = {r["fig5-P1"].params + cbar_note, r["fig5-P1"].build};
    r["figCbar-P2"] = {r["fig5-P2"].params + cbar_note, r["fig5-P2"].build};
    r["figCbar-P3"] = {r["fig5-P3"].params + cbar_note, r["fig5-P3"].build};
    r["figCbar-P4"] = {r["fig5-P4"].params + cbar_note, r["fig5-P4"].build};

    r["fig-rhohomog-L1"] = {"8 particles, 40 sites, eta=1.0, 3000 "
                            "trajectories, T=3000",
                            [=] { return vacancy_ensemble(8, 40,
                                                          kRhoHomogHorizon); }};
    r["fig-rhohomog-L2"] = {"16 particles, 40 sites, eta=1.0, 3000 "
                            "trajectories, T=3000",
                            [=] { return vacancy_ensemble(16, 40,
                                                          kRhoHomogHorizon); }};

    r["fig6-ising-3"] = {"Ising gas, 3 particles, 9 sites (L=3N), eta=1, "
                         "initial |100>, 3000 trajectories",
                         [] { return ising_gas(3, 9); }};
    r["fig6-ising-4"] = {"Ising gas, 4 particles, 12 sites (L=3N), eta=1, "
                         "initial |1000>, 3000 trajectories",
                         [] { return ising_gas(4, 12); }};
    r["fig6-ising-5"] = {"Ising gas, 5 particles, 15 sites (L=3N), eta=1, "
                         "initial |10000>, 3000 trajectories",
                         [] { return ising_gas(5, 15); }};
    r["fig7-ising-dense"] = {"Ising gas, 5 particles on 6 sites, eta=1, "
                             "initial |10000>, 3000 trajectories",
                             [] { return ising_gas(5, 6); }};
    r["fig7-ising-dilute"] = {"Ising gas, 5 particles on 10 sites, eta=1, "
                              "initial |10000>, 3000 trajectories",
                              [] { return ising_gas(5, 10); }};

    r["eq18-superposition"] = {
        "superposed initial state (|vacuum> + |first excited>)/sqrt(2), "
        "4 particles, 8 sites, eta=1.0, 3000 trajectories",
        [] {
          RunConfig cfg = lattice_gas(4, 8, 1.0, kSuperpositionHorizon,
                                      ModelSpec::LatticeInit::Block);
          cfg.plan.engine = EngineKind::Full;
          cfg.plan.initial_state.kind = InitialStateSpec::Kind::Superposition;
          cfg.plan.initial_state.c0 = Complex(std::sqrt(0.5), 0.0);
          cfg.plan.initial_state.c1 = Complex(std::sqrt(0.5), 0.0);
          make_ensemble(cfg);
          return cfg;
        }};
    return r;
  }();
  return defs;
}

const std::vector<std::string>& display_order() {
  static const std::vector<std::string> order = {
      "fig1-A",          "fig1-B",          "fig1-C",
      "fig2-chain",      "fig3-chain-obs",  "fig4-lattice-prop",
      "figBB-A",         "figBB-B",         "figBB-C",
      "figBB-D",         "fig5-P1",         "fig5-P2",
      "fig5-P3",         "fig5-P4",         "figCbar-P1",
      "figCbar-P2",      "figCbar-P3",      "figCbar-P4",
      "fig-rhohomog-L1", "fig-rhohomog-L2", "fig6-ising-3",
      "fig6-ising-4",    "fig6-ising-5",    "fig7-ising-dense",
      "fig7-ising-dilute", "eq18-superposition"};
  return order;
}

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = [] {
    std::vector<PresetInfo> list;
    for (const std::string& name : display_order()) {
      list.push_back({name, registry().at(name).params});
    }
    return list;
  }();
  return catalog;
}

RunConfig preset_config(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    throw ConfigError("unknown preset '" + name +
                      "' (see the presets subcommand for the list)");
  }
  RunConfig cfg = it->second.build();
  cfg.preset = name;
  cfg.description = it->second.params;
  return cfg;
}

std::string preset_table() {
  std::string table;
  for (const PresetInfo& p : preset_catalog()) {
    if (p.name == "figBB-A") {
      table += "figBB: box 150×150×150, diameter 1, sigma 0.32, 100 balls "
               "of mass 1, eta=0.1, T=20000\n";
    }
    table += p.name + ": " + p.params + "\n";
  }
  return table;
}

}  // namespace spingas
