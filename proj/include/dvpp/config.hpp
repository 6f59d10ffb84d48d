#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dvpp/scenario.hpp"

namespace dvpp {

// Scenario files are JSON documents with the sections
//   simulation, nodes, network, estimator   (required)
//   name, control, events, stochastic, output   (optional)
// Unknown keys are rejected. Syntax errors raise ConfigParseError with line/column;
// every semantic problem is collected into a single ValidationError.
ScenarioSpec parse_scenario(std::string_view text);
ScenarioSpec load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
std::string emit_scenario(const ScenarioSpec& spec);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::uint64_t value);
std::string config_hash(const ScenarioSpec& spec);

}  // namespace dvpp
