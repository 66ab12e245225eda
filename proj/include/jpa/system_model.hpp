// SPDX-License-Identifier: Apache-2.0
//
// Shared scenario types for the uplink MIMO-NOMA joint pilot/payload power
// allocation toolkit.
//
// Unit conventions: every power is in watts, every energy in joules, and the
// symbol duration defaults to one second, so "power x symbol count" is an
// energy. SINR thresholds are stored linear; dB appears only at presentation.
// ------------------------------------------------------------------------

#ifndef JPA_SYSTEM_MODEL_HPP
#define JPA_SYSTEM_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jpa
{

// Thrown for any violated scenario invariant. The message names the offending field.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

struct SystemConfig
{
    std::size_t antennas = 2;      // M
    std::size_t users = 4;         // K
    std::size_t pilot_len = 4;     // T, must be >= K
    std::size_t data_len = 96;     // D
    double noise_power = 1e-13;    // sigma^2 [W]
    double energy_budget = 20.0;   // E_max [J]
    double gamma = 3.1622776601683795; // ASINR threshold, linear
    std::vector<double> weights{0.125, 0.125, 0.25, 0.5}; // c_k, non-decreasing
    double symbol_duration = 1.0;  // [s]

    std::size_t frame_len() const { return pilot_len + data_len; }
};

// Large-scale fading variances nu_k^2, descending. Index k is the SIC decoding position.
struct LargeScaleProfile
{
    std::vector<double> nu_sq;

    std::size_t size() const { return nu_sq.size(); }
    double operator[](std::size_t k) const { return nu_sq[k]; }
};

struct PowerAllocation
{
    std::vector<double> alpha; // pilot power per user [W]
    std::vector<double> beta;  // payload power per user [W]

    std::size_t size() const { return alpha.size(); }

    // alpha_k T + beta_k D, i.e. the energy user k spends per frame.
    double energy(std::size_t k, const SystemConfig& cfg) const
    {
        return (alpha[k] * static_cast<double>(cfg.pilot_len) +
                beta[k] * static_cast<double>(cfg.data_len)) *
               cfg.symbol_duration;
    }

    // True when every user is within E_max up to the given relative slack.
    bool within_budget(const SystemConfig& cfg, double rel_slack = 1e-9) const;
};

// The scenario after validation. `permutation[k]` is the caller's original
// index of the user decoded at SIC position k (0-based).
struct Scenario
{
    SystemConfig cfg;
    LargeScaleProfile profile;
    std::vector<std::size_t> permutation;
    bool permuted = false;
};

// Checks every invariant of SystemConfig / LargeScaleProfile and returns the
// scenario with the profile sorted descending. Throws ConfigError.
Scenario validate_config(const SystemConfig& cfg, const LargeScaleProfile& profile);

// Only the SystemConfig part of the checks (no profile needed).
void validate_system_config(const SystemConfig& cfg);

// Reference evaluation constants: M=2, K=T=4, D=96, sigma^2=-100 dBm,
// E_max=20 J, gamma=5 dB, c=[1/8,1/8,1/4,1/2].
SystemConfig reference_config();

} // namespace jpa

#endif
