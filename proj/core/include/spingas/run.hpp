#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "spingas/run_config.hpp"

namespace spingas {

struct RunRequest {
  RunConfig config;
  std::filesystem::path out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  bool deterministic = true;
  bool force = false;  // overwrite an existing manifest
  std::optional<std::filesystem::path> dump_events;
  std::optional<std::filesystem::path> replay_events;
};

// Executes the configured experiment and writes every artifact (CSV series,
// snapshots, optional event dump, manifest.json) into out_dir. Progress
// notes go to `log`. Refuses to overwrite an existing manifest unless
// forced. Event dump/replay applies to single-trajectory runs only.
void execute_run(const RunRequest& req, std::ostream& log);

}  // namespace spingas
