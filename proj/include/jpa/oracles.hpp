// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used by the test suites and by the
// `verify` command. Nothing here shares code with the production paths it
// checks: the estimator oracle works with the full T x T observation
// covariance, and the allocation oracle is a brute-force grid over the
// original (alpha, beta) variables.
// ------------------------------------------------------------------------

#ifndef JPA_ORACLES_HPP
#define JPA_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "jpa/channel.hpp"
#include "jpa/rng.hpp"
#include "jpa/system_model.hpp"

namespace jpa::oracle
{

// Phi = P^H Lambda R_H Lambda P + sigma^2 M I_T with R_H = M diag(nu^2).
ComplexMatrix observation_covariance(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                                     const LargeScaleProfile& profile, double noise_power,
                                     std::size_t antennas);

// A = P^H Lambda R_H, column k is A_k.
ComplexMatrix cross_covariance(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                               const LargeScaleProfile& profile, std::size_t antennas);

// Matrix-form LMMSE estimate: H_hat = Y_p Phi^{-1} A.
ComplexMatrix mmse_estimate_matrix_form(const ComplexMatrix& Y_p, const ComplexMatrix& pilots,
                                        const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                        double noise_power, std::size_t antennas);

// sigma_k^2 = nu_k^2 - (1/M) A_k^H Phi^{-1} A_k.
std::vector<double> cee_variance_matrix_form(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                                             const LargeScaleProfile& profile, double noise_power,
                                             std::size_t antennas);

// Eq.-level ASINR of one user written directly from the expectations.
double asinr_direct(std::size_t k, const std::vector<double>& alpha, const std::vector<double>& beta,
                    const std::vector<double>& nu_sq, double noise_power, double antennas);

struct GridResult
{
    double lambda = 0.0;          // best min_k c_k ASINR_k found, C1-C3 satisfied
    PowerAllocation alloc;
    std::size_t evaluations = 0;
    bool found_feasible = false;
};

// Brute force for K = 2: alpha_k = u_k E/T and beta_k = v_k (E - alpha_k T)/D
// on a points^4 grid over (u1, v1, u2, v2) in [0,1]^4, followed by
// `refine_rounds` zoomed grids of the same resolution around the incumbent.
GridResult k2_grid_search(const SystemConfig& cfg, const LargeScaleProfile& profile,
                          std::size_t points_per_axis, int refine_rounds);

// Small two-user scenario with an interior optimum, used for the grid check.
SystemConfig k2_desk_config();
LargeScaleProfile k2_desk_profile();

// Random scenario for property checks: K in [k_min, k_max], M in {1,2,4},
// nu^2 log-uniform over three decades, unit-scale noise and budgets.
struct RandomScenario
{
    SystemConfig cfg;
    LargeScaleProfile profile;
    PowerAllocation alloc; // random allocation within budget, strictly positive
};

RandomScenario random_scenario(RandomSource& rng, std::size_t k_min, std::size_t k_max);

} // namespace jpa::oracle

#endif
