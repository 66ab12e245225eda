// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value scenario files.
//
//   # comment
//   M = 2
//   K = 4
//   weights = 0.125, 0.125, 0.25, 0.5
//
// Keys are listed in scenario_keys(); anything else is rejected. Keys that
// are absent keep the reference defaults of reference_config(). The user
// profile is either given directly (nu_sq) or drawn from the cell geometry
// keys with drop_seed.
// ------------------------------------------------------------------------

#ifndef JPA_SCENARIO_FILE_HPP
#define JPA_SCENARIO_FILE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jpa/channel.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

struct ScenarioSpec
{
    SystemConfig cfg = reference_config();
    std::optional<LargeScaleProfile> nu_sq; // explicit profile, any order
    CellGeometry geometry;
    std::uint64_t drop_seed = 12;
};

struct ScenarioKey
{
    const char* name;
    const char* description;
};

const std::vector<ScenarioKey>& scenario_keys();

// Applies one assignment; throws ConfigError for unknown keys or bad values.
void apply_setting(ScenarioSpec& spec, const std::string& key, const std::string& value);

// Parses a full file body. Duplicate keys are an error.
ScenarioSpec parse_scenario(const std::string& text, const std::string& origin = "<string>");

ScenarioSpec load_scenario_file(const std::string& path);

// "key=value" override, as given on the command line.
std::pair<std::string, std::string> split_override(const std::string& assignment);

// Validates everything and produces the descending-ordered scenario,
// drawing the profile from the geometry when nu_sq was not given.
Scenario resolve_scenario(const ScenarioSpec& spec);

} // namespace jpa

#endif
