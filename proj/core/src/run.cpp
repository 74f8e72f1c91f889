#include "spingas/run.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "spingas/billiard.hpp"
#include "spingas/errors.hpp"
#include "spingas/io.hpp"
#include "spingas/observables.hpp"
#include "spingas/version.hpp"

namespace spingas {

namespace {

using nlohmann::json;

const char* model_name(ModelSpec::Kind k) {
  switch (k) {
    case ModelSpec::Kind::RandomPairs: return "random-pairs";
    case ModelSpec::Kind::Chain: return "chain";
    case ModelSpec::Kind::LatticeGas: return "lattice-gas";
    case ModelSpec::Kind::Billiard: return "billiard";
  }
  return "?";
}

const char* coupling_name(Coupling c) {
  switch (c) {
    case Coupling::XX: return "xx";
    case Coupling::XXX: return "xxx";
    case Coupling::Ising: return "ising";
  }
  return "?";
}

json initial_json(const InitialStateSpec& s) {
  switch (s.kind) {
    case InitialStateSpec::Kind::SingleExcitation:
      return json{{"kind", "single-excitation"}, {"particle", s.excited + 1}};
    case InitialStateSpec::Kind::Computational:
      return json{{"kind", "computational"}, {"bits", s.bits}};
    case InitialStateSpec::Kind::Superposition:
      return json{{"kind", "superposition"},
                  {"c0", {s.c0.real(), s.c0.imag()}},
                  {"c1", {s.c1.real(), s.c1.imag()}}};
  }
  return json{};
}

json plan_json(const TrajectoryPlan& plan) {
  json model{{"kind", model_name(plan.model.kind)},
             {"particles", plan.model.particles}};
  if (plan.model.kind == ModelSpec::Kind::LatticeGas) {
    model["sites"] = plan.model.sites;
    model["lattice_init"] =
        plan.model.lattice_init == ModelSpec::LatticeInit::Block
            ? "block"
            : "uniform-random";
  }
  if (plan.model.kind == ModelSpec::Kind::Billiard) {
    model["diameter"] = plan.model.diameter;
    model["mass"] = plan.model.mass;
    model["velocity_sigma"] = plan.model.velocity_sigma;
    model["box"] = {plan.model.box[0], plan.model.box[1], plan.model.box[2]};
  }
  return json{
      {"model", model},
      {"coupling", coupling_name(plan.coupling)},
      {"eta", plan.eta},
      {"engine",
       plan.engine == EngineKind::Subspace ? "subspace" : "full"},
      {"initial", initial_json(plan.initial_state)},
      {"steps", plan.steps},
      {"trajectories", plan.n_traj},
      {"seed", plan.seed},
      {"sample_times", plan.sample_times},
  };
}

bool series_enabled(const RunConfig& cfg, const std::string& name) {
  if (cfg.series.empty()) return true;
  return std::find(cfg.series.begin(), cfg.series.end(), name) !=
         cfg.series.end();
}

struct Artifacts {
  json series = json::object();
  json snapshots = json::object();
  json diagnostics = json::object();
};

void write_snapshot_set(const RunRequest& req,
                        const std::vector<std::int64_t>& steps,
                        const std::vector<Eigen::MatrixXcd>& mats,
                        const std::string& stem, Artifacts& art) {
  if (req.config.snapshots == RunConfig::Snapshots::None || mats.empty()) {
    return;
  }
  const bool all = req.config.snapshots == RunConfig::Snapshots::All;
  const std::size_t first = all ? 0 : mats.size() - 1;
  for (std::size_t i = first; i < mats.size(); ++i) {
    const std::string name =
        stem + "_" + std::to_string(steps[i]) + ".bin";
    write_matrix_snapshot(req.out_dir / name, mats[i]);
    art.snapshots[std::to_string(steps[i])] = name;
  }
}

void run_single(const RunRequest& req, std::ostream& log, Artifacts& art) {
  const RunConfig& cfg = req.config;
  const TrajectoryPlan& plan = cfg.plan;

  std::vector<InteractionEvent> replayed;
  std::optional<ReplaySource> replay;
  std::optional<SharedClassicalInit> shared;
  std::unique_ptr<EventSource> owned;
  EventSource* source = nullptr;
  if (req.replay_events) {
    replayed = read_event_log(*req.replay_events, plan.model.particles);
    replay.emplace(std::move(replayed), plan.model.particles);
    source = &*replay;
    art.diagnostics["replayed_from"] = req.replay_events->string();
  } else {
    shared.emplace(plan);
    owned = shared->make_source(plan, 0);
    source = owned.get();
  }
  std::optional<RecordingSource> recorder;
  if (req.dump_events) {
    recorder.emplace(*source);
    source = &*recorder;
  }

  std::vector<std::int64_t> steps;
  std::vector<double> sigma2;
  std::vector<double> ctot;
  std::vector<Eigen::VectorXd> probs;
  std::vector<Eigen::MatrixXcd> snaps;
  const bool want_snaps = cfg.snapshots != RunConfig::Snapshots::None;
  const bool snaps_all = cfg.snapshots == RunConfig::Snapshots::All;

  run_trajectory(plan, 0,
                 [&](const TrajectorySample& s) {
                   steps.push_back(s.step);
                   sigma2.push_back(inhomogeneity(s.probs));
                   ctot.push_back(s.c_tot);
                   probs.push_back(s.probs);
                   if (want_snaps &&
                       (snaps_all ||
                        s.ordinal + 1 == plan.sample_times.size())) {
                     snaps.push_back(s.state);
                   }
                 },
                 nullptr, source);

  if (series_enabled(cfg, "sigma2")) {
    write_series_csv(req.out_dir / "sigma2.csv", "sigma2", steps, sigma2);
    art.series["sigma2"] = "sigma2.csv";
  }
  if (series_enabled(cfg, "ctot")) {
    write_series_csv(req.out_dir / "ctot.csv", "c_tot", steps, ctot);
    art.series["ctot"] = "ctot.csv";
  }
  if (series_enabled(cfg, "probs")) {
    write_probs_csv(req.out_dir / "probs.csv", steps, probs);
    art.series["probs"] = "probs.csv";
  }

  if (want_snaps && !snaps.empty()) {
    std::vector<std::int64_t> snap_steps;
    if (snaps_all) {
      snap_steps = steps;
    } else {
      snap_steps.push_back(steps.back());
    }
    write_snapshot_set(req, snap_steps, snaps, "state", art);
  }

  if (req.dump_events) {
    write_event_log(*req.dump_events, recorder->events());
    art.diagnostics["event_dump"] = req.dump_events->string();
  }
  if (const auto* bb = dynamic_cast<const BilliardSource*>(
          owned ? owned.get() : nullptr)) {
    art.diagnostics["energy_drift"] = bb->max_energy_drift();
    art.diagnostics["wall_events"] = bb->wall_events();
  }
  log << "trajectory complete, " << steps.size() << " samples\n";
}

void run_many(const RunRequest& req, std::ostream& log, Artifacts& art) {
  const RunConfig& cfg = req.config;
  if (req.dump_events || req.replay_events) {
    throw ConfigError("event dump/replay needs a single-trajectory run");
  }

  EnsembleOptions opt;
  opt.workers = req.workers;
  opt.deterministic = req.deterministic;
  const EnsembleResult result = run_ensemble(cfg.plan, opt);
  const EnsembleSeries& s = result.series;

  const auto scalar = [&](const std::string& name, const char* column,
                          const std::vector<double>& values,
                          const std::string& file) {
    if (!series_enabled(cfg, name) || values.empty()) return;
    write_series_csv(req.out_dir / file, column, s.steps, values);
    art.series[name] = file;
  };
  scalar("entropy", "entropy_bits", s.entropy, "entropy.csv");
  scalar("diag_entropy", "diag_entropy_bits", s.diag_entropy,
         "diag_entropy.csv");
  scalar("cbar", "mean_c_tot", s.cbar, "cbar.csv");
  scalar("sigma2", "sigma2", s.sigma2, "sigma2.csv");
  scalar("ctot", "rho_c_tot", s.rho_ctot, "ctot.csv");
  scalar("parity", "even_diagonal_mass", s.parity_even, "parity_even.csv");
  scalar("parity", "cross_coherence_mass", s.parity_cross,
         "parity_cross.csv");
  if (series_enabled(cfg, "probs")) {
    write_probs_csv(req.out_dir / "probs.csv", s.steps, s.probs);
    art.series["probs"] = "probs.csv";
  }
  if (series_enabled(cfg, "concurrence") &&
      s.final_concurrence_table.size() > 0) {
    write_table_csv(req.out_dir / "concurrence_table.csv",
                    s.final_concurrence_table);
    art.series["concurrence"] = "concurrence_table.csv";
  }

  write_snapshot_set(req, s.steps, s.rho, "rho", art);

  art.diagnostics["convergence"] = {
      {"batches", result.convergence.batches},
      {"max_element_variance", result.convergence.max_variance},
  };
  log << "ensemble of " << cfg.plan.n_traj << " trajectories complete, "
      << s.steps.size() << " samples\n";
}

}  // namespace

void execute_run(const RunRequest& req, std::ostream& log) {
  RunRequest r = req;
  finalize_run_config(r.config);

  const auto manifest_path = r.out_dir / "manifest.json";
  std::filesystem::create_directories(r.out_dir);
  if (std::filesystem::exists(manifest_path) && !r.force) {
    throw IoError(manifest_path.string() +
                  " already exists (use --force to overwrite)");
  }

  Artifacts art;
  if (r.config.plan.n_traj == 1) {
    run_single(r, log, art);
  } else {
    run_many(r, log, art);
  }

  json manifest{
      {"format", "spin-gas-manifest/1"},
      {"version", kVersion},
      {"preset", r.config.preset},
      {"description", r.config.description},
      {"workers", r.workers},
      {"deterministic", r.deterministic},
      {"plan", plan_json(r.config.plan)},
      {"series", art.series},
      {"snapshots", art.snapshots},
      {"diagnostics", art.diagnostics},
  };
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  log << "wrote " << manifest_path.string() << "\n";
}

}  // namespace spingas
