// SPDX-License-Identifier: Apache-2.0
//
// Max-min weighted ASINR power allocation.
//
// With t_k = sigma^2 nu_k^2 / (sigma^2 + alpha_k nu_k^2) (the CEE variance)
// every ASINR_k is a ratio of posynomials in (t, beta), so
//
//   maximize lambda
//   C1  sigma^2 T / t_k + D beta_k             <= sigma^2 T / nu_k^2 + E_max
//   C2  t_k <= nu_k^2
//   C3  gamma (IUI_k + RES_k + sigma^2) / beta_k + M t_k   <= M nu_k^2
//   C4  lambda (IUI_k + RES_k + sigma^2) / beta_k + M c_k t_k <= M c_k nu_k^2
//
// is a geometric program. JPA optimises (t, beta, lambda); PPA fixes the
// pilot power at E_max/(T+D) and optimises (beta, lambda) only.
// ------------------------------------------------------------------------

#ifndef JPA_OPTIMIZER_HPP
#define JPA_OPTIMIZER_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jpa/gp.hpp"
#include "jpa/sinr.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

enum class Scheme
{
    Epa,
    Ppa,
    Jpa
};

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& name); // "epa" | "ppa" | "jpa"

inline double t_from_alpha(double alpha, double nu_sq, double noise_power)
{
    return noise_power * nu_sq / (noise_power + alpha * nu_sq);
}

inline double alpha_from_t(double t, double nu_sq, double noise_power)
{
    return noise_power * (nu_sq - t) / (nu_sq * t);
}

struct GpProblem
{
    GeometricProgram gp;
    std::size_t users = 0;
    bool pilots_fixed = false;
    std::vector<double> fixed_t;     // PPA only
    std::vector<double> fixed_alpha; // PPA only
    double beta_min = 0.0;

    // constraint indices into gp.constraints, one per user (C2 empty for PPA)
    std::vector<std::size_t> c1, c2, c3, c4, beta_floor;
    Eigen::VectorXd initial_log_x;

    // variable indices; t_var is invalid when pilots_fixed
    std::size_t t_var(std::size_t k) const { return k; }
    std::size_t beta_var(std::size_t k) const { return pilots_fixed ? k : users + k; }
    std::size_t lambda_var() const { return pilots_fixed ? users : 2 * users; }
};

// JPA program. Scenario assumed validated.
GpProblem build_gp(const SystemConfig& cfg, const LargeScaleProfile& profile);

// PPA program with alpha_k = E_max/(T+D) folded into the coefficients.
GpProblem build_ppa_gp(const SystemConfig& cfg, const LargeScaleProfile& profile);

enum class SolveStatus
{
    Optimal,
    Infeasible,
    MaxIter,
    Fixed // EPA: nothing to optimise
};

const char* to_string(SolveStatus s);

struct Solution
{
    Scheme scheme = Scheme::Jpa;
    PowerAllocation alloc;
    double lambda_star = 0.0;      // achieved min_k c_k ASINR_k
    double lambda_gp = 0.0;        // objective value reported by the GP solver
    SolveStatus status = SolveStatus::Infeasible;
    double kkt_residual = 0.0;
    double phase1_slack = 0.0;
    int iterations = 0;
    AsinrBreakdown asinr;          // closed form at alloc (empty when infeasible)

    bool feasible() const { return status == SolveStatus::Optimal || status == SolveStatus::Fixed; }
};

Solution solve_jpa(const SystemConfig& cfg, const LargeScaleProfile& profile, const GpOptions& opts = {});
Solution solve_ppa(const SystemConfig& cfg, const LargeScaleProfile& profile, const GpOptions& opts = {});

PowerAllocation epa_allocation(const SystemConfig& cfg);
Solution solve_epa(const SystemConfig& cfg, const LargeScaleProfile& profile);

Solution solve_scheme(Scheme scheme, const SystemConfig& cfg, const LargeScaleProfile& profile,
                      const GpOptions& opts = {});

// (sum x)^2 / (K sum x^2). Throws std::invalid_argument when every value is 0.
double jain_index(std::span<const double> values);

// Constraint residuals of an allocation, evaluated in the original
// (alpha, beta) form. Positive *_violation means violated, relative units.
struct ConstraintReport
{
    double c1_violation = 0.0; // max_k (alpha T + beta D)/E_max - 1
    double c2_violation = 0.0; // max_k of -alpha_k, -beta_k (scaled)
    double c3_violation = 0.0; // max_k gamma/ASINR_k - 1
    double c4_violation = 0.0; // max_k lambda/(c_k ASINR_k) - 1
    std::vector<double> c1_slack; // 1 - energy/E_max
    std::vector<double> c3_slack; // ASINR_k/gamma - 1
    std::vector<double> c4_slack; // c_k ASINR_k/lambda - 1
};

ConstraintReport check_constraints(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                   const PowerAllocation& alloc, double lambda);

} // namespace jpa

#endif
