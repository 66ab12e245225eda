// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo link-level simulation of uplink MIMO-NOMA with an MRC-SIC
// receiver and MMSE channel estimates.
//
// Per frame: draw H, send T orthonormal pilots and D Gray-QPSK data symbols,
// estimate every channel, then for k = 1..K combine with hhat_k, slice, count
// bit errors and cancel user k with hhat_k and either the true (genie) or the
// detected symbols. The SINR terms s, G, Q of every SIC step are accumulated
// alongside to estimate E{s}, E{G}, E{Q}.
//
// Frames are grouped in fixed chunks; each chunk is reduced sequentially and
// chunks are combined in index order, so the report is bit-identical for any
// number of worker threads.
// ------------------------------------------------------------------------

#ifndef JPA_LINK_SIM_HPP
#define JPA_LINK_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jpa/kernels.hpp"
#include "jpa/optimizer.hpp"
#include "jpa/sinr.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

enum class SicMode
{
    Genie,
    Detected
};

const char* to_string(SicMode m);
SicMode parse_sic_mode(const std::string& s); // "genie" | "detected"

struct SimJob
{
    SystemConfig cfg;
    LargeScaleProfile profile;
    PowerAllocation alloc;
    std::size_t n_frames = 100000;
    SicMode sic_mode = SicMode::Genie;
    std::uint64_t seed = 1;
    unsigned workers = 0;                 // 0: hardware concurrency
    std::optional<kernels::Isa> isa;      // default: kernels::default_isa()
};

struct SimReport
{
    std::vector<double> analytic_asinr;   // closed form
    std::vector<double> empirical_asinr;  // mean s / (mean G + mean Q + sigma^2)
    std::vector<double> mean_sinr;        // mean of s / (G + Q + sigma^2)
    std::vector<double> mean_sinr_stderr;

    AsinrBreakdown analytic;              // closed-form E{s}, E{G}, E{Q}
    std::vector<double> mean_signal, mean_iui, mean_residual;
    std::vector<double> signal_stderr, iui_stderr, residual_stderr;

    std::vector<double> ber;
    std::vector<double> ber_stderr;       // from per-frame error counts
    std::vector<std::uint64_t> bit_errors;
    std::vector<std::uint64_t> bit_counts; // 2 D n_frames
    std::vector<std::uint64_t> degenerate_frames; // hhat_k == 0

    bool feasible = true;
    double jfi_weighted = 0.0;            // over analytic weighted ASINR
    std::size_t n_frames = 0;
};

// Throws ConfigError on invalid jobs (n_frames == 0, dimension mismatch).
SimReport run(const SimJob& job);

struct SweepRow
{
    Scheme scheme = Scheme::Jpa;
    double energy_budget = 0.0;
    std::size_t user = 0;                 // 1-based SIC position
    SolveStatus status = SolveStatus::Infeasible;
    bool feasible = false;
    double alpha = 0.0, beta = 0.0;
    double lambda_star = 0.0;
    double analytic_asinr = 0.0, empirical_asinr = 0.0;
    double ber = 0.5, ber_stderr = 0.0;
    std::uint64_t errors = 0, bits = 0;
};

struct SweepSpec
{
    std::vector<double> energy_values;    // ascending
    std::vector<Scheme> schemes;
    std::size_t n_frames = 10000;
    SicMode sic_mode = SicMode::Detected;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::optional<kernels::Isa> isa;
};

// Rows ordered by (scheme, E_max, user). Every point reuses the same seed, so
// schemes are compared on common channel and noise realisations. Infeasible
// allocations are not simulated and report BER = 0.5.
std::vector<SweepRow> sweep_energy(const SystemConfig& cfg_template, const LargeScaleProfile& profile,
                                   const SweepSpec& spec, const GpOptions& opts = {});

} // namespace jpa

#endif
