#pragma once

// Scenario documents: one JSON file configuring field, mission, sampler,
// actuator, validity thresholds and mapping. Unknown keys are rejected.

#include <filesystem>
#include <optional>
#include <string_view>

#include "agrione/geomap.hpp"
#include "agrione/mission.hpp"

namespace agrione::scenario {

struct ScenarioConfig {
    mission::MissionConfig mission;
    geomap::IdwParams idw;
    double cell_size_m = 0.5;
};

// Throws ConfigError with the offending key path.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace agrione::scenario
