// SPDX-License-Identifier: Apache-2.0
//
// One-off generator for the cached brute-force optimum of the two-user desk
// scenario. Usage: gen_grid_fixture OUT.json [points_per_axis] [refine_rounds]
// ------------------------------------------------------------------------

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <fmt/core.h>
#include <json.hpp>

#include "jpa/oracles.hpp"

int main(int argc, char** argv)
{
    if (argc < 2)
    {
        std::cerr << "usage: gen_grid_fixture OUT.json [points_per_axis=200] [refine_rounds=3]\n";
        return 1;
    }
    const std::size_t points = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200;
    const int rounds = argc > 3 ? std::atoi(argv[3]) : 3;

    const jpa::SystemConfig cfg = jpa::oracle::k2_desk_config();
    const jpa::LargeScaleProfile prof = jpa::oracle::k2_desk_profile();
    const jpa::oracle::GridResult g = jpa::oracle::k2_grid_search(cfg, prof, points, rounds);

    nlohmann::json j;
    j["description"] = "brute-force max-min weighted ASINR, two users, grid over (alpha, beta)";
    j["scenario"] = {{"M", cfg.antennas},          {"K", cfg.users},       {"T", cfg.pilot_len},
                     {"D", cfg.data_len},          {"noise_power", cfg.noise_power},
                     {"E_max", cfg.energy_budget}, {"gamma", cfg.gamma},   {"weights", cfg.weights},
                     {"nu_sq", prof.nu_sq}};
    j["points_per_axis"] = points;
    j["refine_rounds"] = rounds;
    j["evaluations"] = g.evaluations;
    j["found_feasible"] = g.found_feasible;
    j["lambda"] = g.lambda;
    j["alpha"] = g.alloc.alpha;
    j["beta"] = g.alloc.beta;

    std::ofstream f(argv[1], std::ios::binary);
    f << j.dump(2) << "\n";
    fmt::print("lambda = {:.12g} after {} evaluations\n", g.lambda, g.evaluations);
    return f ? 0 : 1;
}
