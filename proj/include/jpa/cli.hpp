// SPDX-License-Identifier: Apache-2.0
//
// Batch command-line front end: optimize, simulate, sweep, verify.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 at least one
// scheme infeasible (outputs still written), 3 verification failure.
// ------------------------------------------------------------------------

#ifndef JPA_CLI_HPP
#define JPA_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jpa/link_sim.hpp"
#include "jpa/optimizer.hpp"

namespace jpa::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerify = 3;

// Bumped whenever a column is added, removed or changes meaning.
inline constexpr int kSchemaVersion = 1;

struct RunManifest
{
    std::string command;
    std::string scenario_path;           // empty: built-in reference scenario
    std::string out_dir = "results";
    std::uint64_t seed = 1;
    std::vector<std::string> overrides;  // key=value, applied in order
    std::string scheme = "all";
    std::size_t frames = 0;              // 0: command default
    std::string e_grid = "5:30:5";
    std::string sic_mode = "detected";
    unsigned threads = 0;
    std::string kernels = "auto";
    bool inject_fault = false;
};

// "start:stop:step", inclusive of stop up to rounding.
std::vector<double> parse_energy_grid(const std::string& text);

std::vector<Scheme> parse_scheme_set(const std::string& text); // epa|ppa|jpa|all

std::string format_number(double v);
std::string format_db(double linear);

std::string solutions_csv(const std::vector<Solution>& sols, const SystemConfig& cfg,
                          const LargeScaleProfile& profile, const std::vector<std::size_t>& permutation);
std::string link_csv(const std::vector<SweepRow>& rows);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jpa::cli

#endif
