#pragma once

#include <string>

#include "kp/area.hpp"
#include "kp/config.hpp"
#include "kp/scenarios.hpp"

namespace kp {

// JSON text <-> value types. Schemas:
//   configuration  {"dim": 2, "centers": [[x, y], ...], "radii": [r, ...]}
//   expansion pair {"p": <configuration>, "q": <configuration>}
// Malformed input raises kInvalidInput; pairs whose halves disagree on N, dim
// or radii raise kMismatch. `field` carries the offending key path.

Configuration config_from_json(const std::string& text);
std::string config_to_json(const Configuration& config, int indent = -1);

ExpansionPair pair_from_json(const std::string& text);
std::string pair_to_json(const ExpansionPair& pair, int indent = -1);

std::string area_report_to_json(const AreaReport& report, int indent = -1);
std::string scenario_to_json(const ScenarioResult& result, int indent = 2);

/// Whole file as a string; kInvalidInput naming the path when unreadable.
std::string read_file(const std::string& path);
Configuration load_config(const std::string& path);
ExpansionPair load_pair(const std::string& path);

}  // namespace kp
