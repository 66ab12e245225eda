// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/verify.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include <fmt/core.h>

#include "jpa/channel.hpp"
#include "jpa/estimation.hpp"
#include "jpa/link_sim.hpp"
#include "jpa/oracles.hpp"
#include "jpa/sinr.hpp"

namespace jpa
{

BindingReport binding_structure(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                const Solution& sol, double active_tol)
{
    BindingReport r;
    r.users = cfg.users;
    const ConstraintReport cr = check_constraints(cfg, profile, sol.alloc, sol.lambda_star);
    r.max_violation = std::max({cr.c1_violation, cr.c2_violation, cr.c3_violation, cr.c4_violation, 0.0});
    double min_w = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.users; ++k)
    {
        min_w = std::min(min_w, cfg.weights[k] * sol.asinr.asinr[k]);
        const bool c4 = std::abs(cr.c4_slack[k]) <= active_tol;
        const bool c3 = std::abs(cr.c3_slack[k]) <= active_tol;
        r.c4_active += c4;
        r.c3_active += c3;
        r.unexplained += !(c4 || c3);
    }
    r.lambda_mismatch = std::abs(sol.lambda_gp - min_w) / min_w;
    return r;
}

namespace
{

CheckResult check_projection(std::uint64_t seed)
{
    const double var_x = 2.0;
    const std::size_t n = 1000000;
    const ProjectionStats st = projection_sample(var_x, 4, n, seed);
    const bool mean_ok = std::abs(st.mean) < st.mean_abs_bound;
    const double var_rel = std::abs(st.variance - var_x) / var_x;
    const bool corr_ok = std::abs(st.corr) < 3.0 * st.corr_stderr;
    return {"projection-independence", mean_ok && var_rel < 0.01 && corr_ok,
            fmt::format("|mean|={:.2e} (bound {:.2e}), var rel err={:.2e}, corr={:.2e} (3se {:.2e})",
                        std::abs(st.mean), st.mean_abs_bound, var_rel, st.corr, 3.0 * st.corr_stderr)};
}

CheckResult check_estimator(std::uint64_t seed)
{
    RandomSource rng(make_stream(seed, StreamTag::Scenario, 0xe5));
    double worst_h = 0.0, worst_var = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        const oracle::RandomScenario sc = oracle::random_scenario(rng, 1, 6);
        const ComplexMatrix P = pilot_matrix(sc.cfg.users, sc.cfg.pilot_len);
        ComplexMatrix H;
        draw_channel_matrix(sc.profile, sc.cfg.antennas, rng, H);
        ComplexMatrix Lambda = ComplexMatrix::Zero(H.cols(), H.cols());
        for (Eigen::Index k = 0; k < H.cols(); ++k)
            Lambda(k, k) = std::sqrt(sc.alloc.alpha[static_cast<std::size_t>(k)]);
        ComplexMatrix Y = H * Lambda * P;
        for (Eigen::Index m = 0; m < Y.rows(); ++m)
            for (Eigen::Index t = 0; t < Y.cols(); ++t)
                Y(m, t) += rng.complex_normal(sc.cfg.noise_power);

        const EstimationResult fast = estimate(Y, P, sc.alloc, sc.profile, sc.cfg.noise_power);
        const ComplexMatrix ref =
            oracle::mmse_estimate_matrix_form(Y, P, sc.alloc, sc.profile, sc.cfg.noise_power, sc.cfg.antennas);
        worst_h = std::max(worst_h, (fast.H_hat - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());

        const std::vector<double> var_ref =
            oracle::cee_variance_matrix_form(P, sc.alloc, sc.profile, sc.cfg.noise_power, sc.cfg.antennas);
        for (std::size_t k = 0; k < var_ref.size(); ++k)
            worst_var = std::max(worst_var, std::abs(fast.cee_var[k] - var_ref[k]) / var_ref[k]);
    }
    return {"estimator-matrix-form", worst_h <= 1e-10 && worst_var <= 1e-10,
            fmt::format("50 scenarios, max rel diff H_hat={:.2e}, sigma_k^2={:.2e}", worst_h, worst_var)};
}

double rel_term_error(double analytic, double empirical)
{
    if (analytic == 0.0)
        return std::abs(empirical);
    return std::abs(empirical - analytic) / analytic;
}

std::vector<CheckResult> check_asinr(const VerifyOptions& opts)
{
    const Scenario& sc = opts.scenario;
    Solution sol = solve_jpa(sc.cfg, sc.profile);
    if (!sol.feasible())
        sol = solve_epa(sc.cfg, sc.profile);

    SimJob job{sc.cfg, sc.profile, sol.alloc, opts.frames, SicMode::Genie, opts.seed, opts.workers, opts.isa};
    const SimReport rep = run(job);

    AsinrBreakdown analytic = rep.analytic;
    if (opts.inject_fault)
        for (std::size_t k = 0; k < analytic.size(); ++k)
        {
            analytic.signal[k] *= 1.05;
            analytic.asinr[k] *= 1.05;
        }

    double worst = 0.0;
    std::string worst_at = "-";
    bool bound_ok = true;
    double max_gap_db = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k)
    {
        const std::array<std::pair<const char*, double>, 3> errs{{
            {"signal", rel_term_error(analytic.signal[k], rep.mean_signal[k])},
            {"iui", rel_term_error(analytic.iui[k], rep.mean_iui[k])},
            {"residual", rel_term_error(analytic.residual[k], rep.mean_residual[k])},
        }};
        for (const auto& [name, e] : errs)
            if (e > worst)
            {
                worst = e;
                worst_at = fmt::format("user {} {}", k + 1, name);
            }
        if (rep.mean_sinr[k] < analytic.asinr[k] - 3.0 * rep.mean_sinr_stderr[k])
            bound_ok = false;
        max_gap_db = std::max(max_gap_db, linear_to_db(rep.mean_sinr[k]) - linear_to_db(analytic.asinr[k]));
    }
    return {
        {"asinr-terms-vs-monte-carlo", worst <= 0.02,
         fmt::format("{} allocation, {} frames, worst term error {:.3f}% at {}", to_string(sol.scheme), opts.frames,
                     100.0 * worst, worst_at)},
        {"asinr-lower-bound", bound_ok,
         fmt::format("mean instantaneous SINR >= closed form - 3se, largest gap {:.3f} dB", max_gap_db)},
    };
}

CheckResult check_grid()
{
    const SystemConfig cfg = oracle::k2_desk_config();
    const LargeScaleProfile prof = oracle::k2_desk_profile();
    const Solution sol = solve_jpa(cfg, prof);
    const oracle::GridResult grid = oracle::k2_grid_search(cfg, prof, 40, 6);
    if (!sol.feasible() || !grid.found_feasible)
        return {"gp-vs-grid-k2", false, "solver or grid found no feasible point"};
    const double rel = (sol.lambda_star - grid.lambda) / grid.lambda;
    // The grid only visits feasible points, so the solver may not fall below it.
    const bool ok = rel >= -1e-6 && std::abs(rel) <= 0.005;
    return {"gp-vs-grid-k2", ok,
            fmt::format("solver {:.9g}, grid {:.9g}, rel diff {:.2e}", sol.lambda_star, grid.lambda, rel)};
}

CheckResult check_kkt(const Scenario& sc)
{
    const Solution sol = solve_jpa(sc.cfg, sc.profile);
    if (!sol.feasible())
        return {"gp-optimum-structure", true,
                fmt::format("scenario infeasible (phase-I slack {:.3g}); nothing to check", sol.phase1_slack)};
    const BindingReport b = binding_structure(sc.cfg, sc.profile, sol);
    const bool ok = b.max_violation <= 1e-7 && b.lambda_mismatch <= 1e-5 && b.unexplained == 0;
    return {"gp-optimum-structure", ok,
            fmt::format("violation {:.1e}, lambda mismatch {:.1e}, C4 active {}/{}, C3 active {}, neither {}",
                        b.max_violation, b.lambda_mismatch, b.c4_active, b.users, b.c3_active, b.unexplained)};
}

} // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opts)
{
    std::vector<CheckResult> out;
    out.push_back(check_projection(opts.seed));
    out.push_back(check_estimator(opts.seed));
    for (auto& c : check_asinr(opts))
        out.push_back(std::move(c));
    out.push_back(check_grid());
    out.push_back(check_kkt(opts.scenario));
    return out;
}

} // namespace jpa
