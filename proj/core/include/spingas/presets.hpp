#pragma once

#include <string>
#include <vector>

#include "spingas/run_config.hpp"

namespace spingas {

struct PresetInfo {
  std::string name;
  std::string params;  // caption parameters, human readable
};

// Every built-in experiment, in display order.
const std::vector<PresetInfo>& preset_catalog();

// Fully populated config for one preset; throws ConfigError if unknown.
RunConfig preset_config(const std::string& name);

// Text table for the `presets` subcommand (one "name: params" line each,
// plus family annotation lines).
std::string preset_table();

}  // namespace spingas
