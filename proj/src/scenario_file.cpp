// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace jpa
{

namespace
{

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, text));
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text)
{
    const std::uint64_t v = parse_u64(key, text);
    if (v == 0)
        throw ConfigError(fmt::format("{} must be positive", key));
    return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::string norm = text;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::istringstream in(norm);
    std::vector<double> out;
    std::string item;
    while (in >> item)
        out.push_back(parse_double(key, item));
    if (out.empty())
        throw ConfigError(fmt::format("{}: empty list", key));
    return out;
}

// Pairs of keys that describe the same quantity in different units.
const std::vector<std::pair<std::string, std::string>> kAliases{
    {"noise_power", "noise_power_dbm"},
    {"gamma", "gamma_db"},
};

} // namespace

const std::vector<ScenarioKey>& scenario_keys()
{
    static const std::vector<ScenarioKey> keys{
        {"M", "receive antennas"},
        {"K", "users"},
        {"T", "pilot symbols per frame (T >= K)"},
        {"D", "data symbols per frame"},
        {"noise_power", "noise power sigma^2 [W]"},
        {"noise_power_dbm", "noise power sigma^2 [dBm]"},
        {"E_max", "per-user energy budget per frame [J]"},
        {"gamma", "ASINR threshold, linear"},
        {"gamma_db", "ASINR threshold [dB]"},
        {"weights", "K non-decreasing positive weights c_k"},
        {"symbol_duration", "symbol duration [s]"},
        {"nu_sq", "K large-scale gains (linear); overrides the geometry"},
        {"cell_radius", "cell radius [m]"},
        {"min_distance", "minimum user distance [m]"},
        {"pathloss_model", "path-loss model tag (3gpp-urban)"},
        {"shadowing_std_db", "log-normal shadowing std [dB], 0 disables"},
        {"drop_seed", "seed of the user drop"},
    };
    return keys;
}

void apply_setting(ScenarioSpec& spec, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    SystemConfig& cfg = spec.cfg;

    if (key == "M")
        cfg.antennas = parse_count(key, value);
    else if (key == "K")
        cfg.users = parse_count(key, value);
    else if (key == "T")
        cfg.pilot_len = parse_count(key, value);
    else if (key == "D")
        cfg.data_len = parse_count(key, value);
    else if (key == "noise_power")
        cfg.noise_power = parse_double(key, value);
    else if (key == "noise_power_dbm")
        cfg.noise_power = dbm_to_watts(parse_double(key, value));
    else if (key == "E_max")
        cfg.energy_budget = parse_double(key, value);
    else if (key == "gamma")
        cfg.gamma = parse_double(key, value);
    else if (key == "gamma_db")
        cfg.gamma = db_to_linear(parse_double(key, value));
    else if (key == "weights")
        cfg.weights = parse_list(key, value);
    else if (key == "symbol_duration")
        cfg.symbol_duration = parse_double(key, value);
    else if (key == "nu_sq")
        spec.nu_sq = LargeScaleProfile{parse_list(key, value)};
    else if (key == "cell_radius")
        spec.geometry.radius = parse_double(key, value);
    else if (key == "min_distance")
        spec.geometry.min_distance = parse_double(key, value);
    else if (key == "pathloss_model")
        spec.geometry.pathloss_model = value;
    else if (key == "shadowing_std_db")
        spec.geometry.shadowing_std_db = parse_double(key, value);
    else if (key == "drop_seed")
        spec.drop_seed = parse_u64(key, value);
    else
        throw ConfigError(fmt::format("unknown scenario key '{}'", key));
}

ScenarioSpec parse_scenario(const std::string& text, const std::string& origin)
{
    ScenarioSpec spec;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, lineno));
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second)
            throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", origin, lineno, key));
        try
        {
            apply_setting(spec, key, line.substr(eq + 1));
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(fmt::format("{}:{}: {}", origin, lineno, e.what()));
        }
    }
    for (const auto& [a, b] : kAliases)
        if (seen.count(a) && seen.count(b))
            throw ConfigError(fmt::format("{}: '{}' and '{}' are mutually exclusive", origin, a, b));
    return spec;
}

ScenarioSpec load_scenario_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError(fmt::format("cannot open scenario file '{}'", path));
    std::ostringstream body;
    body << f.rdbuf();
    return parse_scenario(body.str(), path);
}

std::pair<std::string, std::string> split_override(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(fmt::format("override '{}' is not of the form key=value", assignment));
    return {trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1))};
}

Scenario resolve_scenario(const ScenarioSpec& spec)
{
    validate_system_config(spec.cfg);
    if (spec.nu_sq)
        return validate_config(spec.cfg, *spec.nu_sq);
    spec.geometry.validate();
    return validate_config(spec.cfg, draw_user_drop(spec.geometry, spec.cfg.users, spec.drop_seed));
}

} // namespace jpa
