#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spingas/ensemble.hpp"

namespace spingas {

// A fully described experiment: the trajectory plan plus output policy.
struct RunConfig {
  std::string preset;       // resolved preset name; empty for manual configs
  std::string description;  // one-line summary (presets fill this in)
  TrajectoryPlan plan;

  enum class Snapshots { None, Final, All };
  Snapshots snapshots = Snapshots::Final;

  // Empty = write every series the run produces; otherwise a subset of
  // {sigma2, ctot, cbar, entropy, diag_entropy, probs, parity, concurrence}.
  std::vector<std::string> series;

  std::int64_t sample_cap = 200;  // interior samples for long horizons
};

// Series names write_outputs understands, for validation.
const std::vector<std::string>& known_series();

// Parses the sectioned key=value format:
//
//   preset = fig5-P1          # top level, exclusive with [model]/[quantum]
//   [model]
//   kind = lattice-gas        # random-pairs | chain | lattice-gas | billiard
//   particles = 8
//   sites = 16
//   lattice_init = block      # block | uniform-random
//   diameter = 1.0            # billiard only
//   mass = 1.0
//   velocity_sigma = 0.32
//   box = 150 150 150
//   [quantum]
//   coupling = xx             # xx | xxx | ising
//   eta = 1.0
//   engine = auto             # auto | subspace | full
//   initial = k:1             # k:<1-based index> | bits:<01 string> |
//                             # super:(re,im),(re,im)
//   steps = 20000
//   [ensemble]
//   trajectories = 3000
//   seed = 1
//   samples = 200
//   [output]
//   snapshots = final         # none | final | all
//   series = all              # or comma list
//
// '#' or ';' lines are comments. Unknown sections/keys are rejected with
// origin:line diagnostics. Defaults are applied afterwards by
// finalize_run_config.
RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin);
RunConfig parse_run_config_file(const std::filesystem::path& path);

// Resolves engine=auto, fills default sample times, and validates the plan.
void finalize_run_config(RunConfig& cfg);

}  // namespace spingas
