// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace jpa
{

const char* to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::Epa: return "epa";
    case Scheme::Ppa: return "ppa";
    case Scheme::Jpa: return "jpa";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "epa")
        return Scheme::Epa;
    if (name == "ppa")
        return Scheme::Ppa;
    if (name == "jpa")
        return Scheme::Jpa;
    throw ConfigError(fmt::format("unknown scheme '{}'", name));
}

const char* to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::Fixed: return "fixed";
    }
    return "?";
}

namespace
{

using Exps = std::vector<std::pair<std::size_t, double>>;

// Builds C1..C4 for either scheme. With fixed pilots every t_l^e factor is
// folded into the coefficient, leaving posynomials in (beta, lambda).
GpProblem build_common(const SystemConfig& cfg, const LargeScaleProfile& profile,
                       const std::vector<double>* fixed_t)
{
    const std::size_t K = cfg.users;
    const double M = static_cast<double>(cfg.antennas);
    const double T = static_cast<double>(cfg.pilot_len);
    const double D = static_cast<double>(cfg.data_len);
    const double s2 = cfg.noise_power;
    const double E = cfg.energy_budget / cfg.symbol_duration; // budget in power x symbols
    const double g = cfg.gamma;

    GpProblem P;
    P.users = K;
    P.pilots_fixed = fixed_t != nullptr;
    if (fixed_t)
        P.fixed_t = *fixed_t;
    P.gp.n_vars = P.pilots_fixed ? K + 1 : 2 * K + 1;
    P.gp.objective_var = P.lambda_var();
    P.beta_min = 1e-12 * E / D;

    // coefficient * t_l, either as a variable factor or folded constant
    auto with_t = [&](double coeff, std::size_t l, Exps exps) {
        if (P.pilots_fixed)
            return std::pair<double, Exps>{coeff * P.fixed_t[l], std::move(exps)};
        exps.emplace_back(P.t_var(l), 1.0);
        return std::pair<double, Exps>{coeff, std::move(exps)};
    };

    for (std::size_t k = 0; k < K; ++k)
    {
        const double nu = profile[k];
        const std::size_t bk = P.beta_var(k);
        const std::size_t lam = P.lambda_var();

        // C1, divided by its right-hand side
        {
            Posynomial p;
            const double rhs = s2 * T / nu + E;
            if (P.pilots_fixed)
                p.add(s2 * T / (rhs * P.fixed_t[k]));
            else
                p.add(s2 * T / rhs, {{P.t_var(k), -1.0}});
            p.add(D / rhs, {{bk, 1.0}});
            P.c1.push_back(P.gp.constraints.size());
            P.gp.add_constraint(std::move(p), fmt::format("C1[{}]", k + 1));
        }
        // C2: t_k <= nu_k^2 (vacuous for fixed pilots)
        if (!P.pilots_fixed)
        {
            Posynomial p;
            p.add(1.0 / nu, {{P.t_var(k), 1.0}});
            P.c2.push_back(P.gp.constraints.size());
            P.gp.add_constraint(std::move(p), fmt::format("C2[{}]", k + 1));
        }
        // C3 (threshold) and C4 (epigraph): same shape, multiplier gamma or lambda
        for (int which = 3; which <= 4; ++which)
        {
            const double scale = which == 3 ? g / (M * nu) : 1.0 / (M * cfg.weights[k] * nu);
            Exps mult = which == 3 ? Exps{} : Exps{{lam, 1.0}};
            Posynomial p;
            for (std::size_t l = k + 1; l < K; ++l)
            {
                Exps e = mult;
                e.emplace_back(P.beta_var(l), 1.0);
                e.emplace_back(bk, -1.0);
                p.add(scale * profile[l], std::move(e));
            }
            for (std::size_t l = 0; l <= k; ++l)
            {
                Exps e = mult;
                if (l != k)
                {
                    e.emplace_back(P.beta_var(l), 1.0);
                    e.emplace_back(bk, -1.0);
                }
                auto [c, ex] = with_t(scale, l, std::move(e));
                p.add(c, std::move(ex));
            }
            {
                Exps e = mult;
                e.emplace_back(bk, -1.0);
                p.add(scale * s2, std::move(e));
            }
            {
                auto [c, ex] = with_t(1.0 / nu, k, Exps{});
                p.add(c, std::move(ex));
            }
            (which == 3 ? P.c3 : P.c4).push_back(P.gp.constraints.size());
            P.gp.add_constraint(std::move(p), fmt::format("C{}[{}]", which, k + 1));
        }
    }
    for (std::size_t k = 0; k < K; ++k)
    {
        Posynomial p;
        p.add(P.beta_min, {{P.beta_var(k), -1.0}});
        P.beta_floor.push_back(P.gp.constraints.size());
        P.gp.add_constraint(std::move(p), fmt::format("beta_min[{}]", k + 1));
    }

    // Half the budget on each phase; lambda starts at the threshold level.
    P.initial_log_x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P.gp.n_vars));
    for (std::size_t k = 0; k < K; ++k)
    {
        if (!P.pilots_fixed)
            P.initial_log_x[static_cast<Eigen::Index>(P.t_var(k))] =
                std::log(t_from_alpha(0.5 * E / T, profile[k], s2));
        P.initial_log_x[static_cast<Eigen::Index>(P.beta_var(k))] = std::log(0.5 * E / D);
    }
    P.initial_log_x[static_cast<Eigen::Index>(P.lambda_var())] =
        std::log(g * *std::min_element(cfg.weights.begin(), cfg.weights.end()));
    return P;
}

Solution finish(Scheme scheme, const GpProblem& P, const GpResult& r, const SystemConfig& cfg,
                const LargeScaleProfile& profile)
{
    Solution sol;
    sol.scheme = scheme;
    sol.iterations = r.iterations;
    sol.phase1_slack = r.phase1_slack;
    sol.kkt_residual = r.dual_residual;
    sol.lambda_gp = r.objective;
    switch (r.status)
    {
    case GpStatus::Optimal: sol.status = SolveStatus::Optimal; break;
    case GpStatus::Infeasible: sol.status = SolveStatus::Infeasible; break;
    case GpStatus::MaxIter: sol.status = SolveStatus::MaxIter; break;
    }
    if (sol.status == SolveStatus::Infeasible)
        return sol;

    const std::size_t K = P.users;
    sol.alloc.alpha.resize(K);
    sol.alloc.beta.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        sol.alloc.beta[k] = std::exp(r.log_x[static_cast<Eigen::Index>(P.beta_var(k))]);
        if (P.pilots_fixed)
            sol.alloc.alpha[k] = P.fixed_alpha[k];
        else
        {
            const double t = std::exp(r.log_x[static_cast<Eigen::Index>(P.t_var(k))]);
            sol.alloc.alpha[k] = std::max(0.0, alpha_from_t(t, profile[k], cfg.noise_power));
        }
    }
    sol.asinr = asinr_closed_form(sol.alloc, profile, cfg);
    const auto w = weighted_asinr(sol.asinr, cfg.weights);
    sol.lambda_star = *std::min_element(w.begin(), w.end());
    return sol;
}

} // namespace

GpProblem build_gp(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    return build_common(cfg, profile, nullptr);
}

GpProblem build_ppa_gp(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    const PowerAllocation epa = epa_allocation(cfg);
    std::vector<double> t(cfg.users);
    for (std::size_t k = 0; k < cfg.users; ++k)
        t[k] = t_from_alpha(epa.alpha[k], profile[k], cfg.noise_power);
    GpProblem P = build_common(cfg, profile, &t);
    P.fixed_alpha = epa.alpha;
    return P;
}

Solution solve_jpa(const SystemConfig& cfg, const LargeScaleProfile& profile, const GpOptions& opts)
{
    const GpProblem P = build_gp(cfg, profile);
    return finish(Scheme::Jpa, P, solve_gp(P.gp, P.initial_log_x, opts), cfg, profile);
}

Solution solve_ppa(const SystemConfig& cfg, const LargeScaleProfile& profile, const GpOptions& opts)
{
    const GpProblem P = build_ppa_gp(cfg, profile);
    return finish(Scheme::Ppa, P, solve_gp(P.gp, P.initial_log_x, opts), cfg, profile);
}

PowerAllocation epa_allocation(const SystemConfig& cfg)
{
    const double p = cfg.energy_budget / (static_cast<double>(cfg.frame_len()) * cfg.symbol_duration);
    return PowerAllocation{std::vector<double>(cfg.users, p), std::vector<double>(cfg.users, p)};
}

Solution solve_epa(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    Solution sol;
    sol.scheme = Scheme::Epa;
    sol.status = SolveStatus::Fixed;
    sol.alloc = epa_allocation(cfg);
    sol.asinr = asinr_closed_form(sol.alloc, profile, cfg);
    const auto w = weighted_asinr(sol.asinr, cfg.weights);
    sol.lambda_star = *std::min_element(w.begin(), w.end());
    return sol;
}

Solution solve_scheme(Scheme scheme, const SystemConfig& cfg, const LargeScaleProfile& profile,
                      const GpOptions& opts)
{
    switch (scheme)
    {
    case Scheme::Epa: return solve_epa(cfg, profile);
    case Scheme::Ppa: return solve_ppa(cfg, profile, opts);
    case Scheme::Jpa: return solve_jpa(cfg, profile, opts);
    }
    throw std::logic_error("unreachable");
}

double jain_index(std::span<const double> values)
{
    double s = 0.0, s2 = 0.0;
    for (double v : values)
    {
        if (v < 0.0)
            throw std::invalid_argument("jain_index: values must be non-negative");
        s += v;
        s2 += v * v;
    }
    if (s2 == 0.0)
        throw std::invalid_argument("jain_index: all values are zero");
    return s * s / (static_cast<double>(values.size()) * s2);
}

ConstraintReport check_constraints(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                   const PowerAllocation& alloc, double lambda)
{
    const std::size_t K = cfg.users;
    const AsinrBreakdown b = asinr_closed_form(alloc, profile, cfg);
    ConstraintReport r;
    r.c1_violation = r.c2_violation = r.c3_violation = r.c4_violation = -1.0;
    r.c1_slack.resize(K);
    r.c3_slack.resize(K);
    r.c4_slack.resize(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const double used = alloc.energy(k, cfg) / cfg.energy_budget;
        r.c1_slack[k] = 1.0 - used;
        r.c1_violation = std::max(r.c1_violation, used - 1.0);
        r.c2_violation = std::max({r.c2_violation, -alloc.alpha[k], -alloc.beta[k]});
        r.c3_slack[k] = b.asinr[k] / cfg.gamma - 1.0;
        r.c3_violation = std::max(r.c3_violation, cfg.gamma / b.asinr[k] - 1.0);
        const double wk = cfg.weights[k] * b.asinr[k];
        r.c4_slack[k] = wk / lambda - 1.0;
        r.c4_violation = std::max(r.c4_violation, lambda / wk - 1.0);
    }
    return r;
}

} // namespace jpa
