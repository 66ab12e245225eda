// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/system_model.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/core.h>

namespace jpa
{

namespace
{
void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(fmt::format("{} must be a positive finite number (got {})", name, v));
}
} // namespace

bool PowerAllocation::within_budget(const SystemConfig& cfg, double rel_slack) const
{
    for (std::size_t k = 0; k < size(); ++k)
        if (energy(k, cfg) > cfg.energy_budget * (1.0 + rel_slack))
            return false;
    return true;
}

void validate_system_config(const SystemConfig& cfg)
{
    if (cfg.antennas == 0)
        throw ConfigError("M (antennas) must be positive");
    if (cfg.users == 0)
        throw ConfigError("K (users) must be positive");
    if (cfg.data_len == 0)
        throw ConfigError("D (data symbols) must be positive");
    if (cfg.pilot_len < cfg.users)
        throw ConfigError(fmt::format("T < K: orthogonal pilots need T >= K (T={}, K={})",
                                      cfg.pilot_len, cfg.users));
    require_positive(cfg.noise_power, "noise_power");
    require_positive(cfg.energy_budget, "E_max");
    require_positive(cfg.gamma, "gamma");
    require_positive(cfg.symbol_duration, "symbol_duration");

    if (cfg.weights.size() != cfg.users)
        throw ConfigError(fmt::format("dimension mismatch: |c| = {} but K = {}",
                                      cfg.weights.size(), cfg.users));
    for (double c : cfg.weights)
        require_positive(c, "weight");
    if (!std::is_sorted(cfg.weights.begin(), cfg.weights.end()))
        throw ConfigError("weights must be non-decreasing in SIC order (c_1 <= ... <= c_K)");
}

Scenario validate_config(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    validate_system_config(cfg);
    if (profile.size() != cfg.users)
        throw ConfigError(fmt::format("dimension mismatch: |nu_sq| = {} but K = {}",
                                      profile.size(), cfg.users));
    for (double v : profile.nu_sq)
        require_positive(v, "nu_sq");

    Scenario out;
    out.cfg = cfg;
    out.permutation.resize(cfg.users);
    std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](std::size_t a, std::size_t b) { return profile.nu_sq[a] > profile.nu_sq[b]; });

    out.profile.nu_sq.resize(cfg.users);
    for (std::size_t k = 0; k < cfg.users; ++k)
    {
        out.profile.nu_sq[k] = profile.nu_sq[out.permutation[k]];
        if (out.permutation[k] != k)
            out.permuted = true;
    }
    return out;
}

SystemConfig reference_config()
{
    SystemConfig cfg;
    cfg.antennas = 2;
    cfg.users = 4;
    cfg.pilot_len = 4;
    cfg.data_len = 96;
    cfg.noise_power = dbm_to_watts(-100.0);
    cfg.energy_budget = 20.0;
    cfg.gamma = db_to_linear(5.0);
    cfg.weights = {0.125, 0.125, 0.25, 0.5};
    cfg.symbol_duration = 1.0;
    return cfg;
}

} // namespace jpa
