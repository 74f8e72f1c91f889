#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spingas/errors.hpp"
#include "spingas/presets.hpp"
#include "spingas/run.hpp"
#include "spingas/version.hpp"

namespace {

using namespace spingas;

struct RunFlags {
  std::string preset;
  std::string config_file;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int workers = 0;
  int trajectories = 0;
  std::int64_t steps = 0;
  std::int64_t samples = 0;
  bool force = false;
  bool nondeterministic = false;
  std::string dump_events;
  std::string replay_events;
  std::string events;  // replay subcommand
};

void add_common_options(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--out", f.out_dir, "Output directory")
      ->capture_default_str();
  cmd.add_option("--seed", f.seed, "Override the RNG seed");
  cmd.add_option("--workers", f.workers,
                 "Ensemble worker threads (0 = hardware concurrency)");
  cmd.add_option("--trajectories", f.trajectories,
                 "Override the trajectory count");
  cmd.add_option("--steps", f.steps, "Override the evolution horizon");
  cmd.add_option("--samples", f.samples,
                 "Override the interior sample cap for long horizons");
  cmd.add_flag("--force", f.force, "Overwrite an existing manifest");
  cmd.add_flag("--nondeterministic", f.nondeterministic,
               "Merge trajectory blocks in completion order (faster, "
               "not bit-reproducible)");
}

RunRequest build_request(const CLI::App& cmd, const RunFlags& f) {
  RunRequest req;
  if (!f.preset.empty()) {
    req.config = preset_config(f.preset);
  } else if (!f.config_file.empty()) {
    req.config = parse_run_config_file(f.config_file);
  } else {
    throw ConfigError("one of --preset or --config is required");
  }
  if (cmd.count("--seed")) req.config.plan.seed = f.seed;
  if (cmd.count("--trajectories")) req.config.plan.n_traj = f.trajectories;
  if (cmd.count("--steps")) {
    req.config.plan.steps = f.steps;
    req.config.plan.sample_times.clear();
  }
  if (cmd.count("--samples")) req.config.sample_cap = f.samples;
  req.out_dir = f.out_dir;
  req.workers = f.workers;
  req.deterministic = !f.nondeterministic;
  req.force = f.force;
  if (!f.dump_events.empty()) req.dump_events = f.dump_events;
  if (!f.replay_events.empty()) req.replay_events = f.replay_events;
  return req;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"spin-gas: semi-quantal spin gas simulator"};
  app.set_version_flag("--version", std::string("spin-gas ") + kVersion);
  app.require_subcommand(1);

  RunFlags f;
  CLI::App* run = app.add_subcommand(
      "run", "Execute a preset or configured experiment");
  auto* preset_opt =
      run->add_option("--preset", f.preset, "Built-in experiment name");
  run->add_option("--config", f.config_file, "Config file (key = value)")
      ->excludes(preset_opt);
  add_common_options(*run, f);
  run->add_option("--dump-events", f.dump_events,
                  "Record the classical event stream to this file "
                  "(single trajectory only)");
  run->add_option("--replay-events", f.replay_events,
                  "Drive the quantum evolution from a recorded event "
                  "stream instead of the classical model");

  CLI::App* presets =
      app.add_subcommand("presets", "List the built-in experiments");

  CLI::App* replay = app.add_subcommand(
      "replay", "Re-run a single trajectory from a recorded event stream");
  replay->add_option("--events", f.events, "Recorded event stream")
      ->required();
  auto* rp = replay->add_option("--preset", f.preset,
                                "Preset naming the quantum setup");
  replay->add_option("--config", f.config_file, "Config file")->excludes(rp);
  add_common_options(*replay, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (presets->parsed()) {
    std::cout << preset_table();
    return 0;
  }

  const CLI::App& cmd = run->parsed() ? *run : *replay;
  RunRequest req = build_request(cmd, f);
  if (replay->parsed()) {
    req.replay_events = f.events;
    req.config.plan.n_traj = 1;  // replay drives exactly one trajectory
  }
  execute_run(req, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return cli_main(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
