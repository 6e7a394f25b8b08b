#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uwbped/diagram.hpp"
#include "uwbped/pipeline.hpp"
#include "uwbped/simgen.hpp"

namespace uwbped::cli {

// Everything a CLI invocation needs. The file format is JSON; keys may be
// written nested ({"track": {"radius": 1.5}}) or dotted ({"track.radius": 1.5}).
// Missing keys keep their defaults, unknown keys are rejected.
struct RunConfig {
  AnalysisConfig analysis;
  double bin_width = kDefaultBinWidth;
  ScenarioConfig scenario;  // shares geometry and section with `analysis`
  std::uint64_t seed = 1;
};

// All accepted dotted keys, in documentation order.
const std::vector<std::string>& known_config_keys();

// Throws ValidationError naming the offending key.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace uwbped::cli
