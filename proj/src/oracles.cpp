// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace jpa::oracle
{

namespace
{

// The oracle runs in extended precision: sigma_k^2 is a small difference of
// two numbers of size nu_k^2 when the pilot SNR is high.
using Real = long double;
using XMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

XMatrix widen(const ComplexMatrix& m) { return m.cast<std::complex<Real>>(); }

ComplexMatrix narrow(const XMatrix& m) { return m.cast<std::complex<double>>(); }

// Diagonal of Lambda R_H, or of Lambda R_H Lambda when `both` is set.
XMatrix diag_terms(const PowerAllocation& alloc, const LargeScaleProfile& profile, std::size_t antennas, bool both)
{
    const auto K = static_cast<Eigen::Index>(profile.size());
    XMatrix d = XMatrix::Zero(K, K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const auto i = static_cast<std::size_t>(k);
        const Real lam = std::sqrt(static_cast<Real>(alloc.alpha[i]));
        const Real rh = static_cast<Real>(antennas) * static_cast<Real>(profile[i]);
        d(k, k) = both ? lam * rh * lam : lam * rh;
    }
    return d;
}

XMatrix phi_x(const ComplexMatrix& pilots, const PowerAllocation& alloc, const LargeScaleProfile& profile,
              double noise_power, std::size_t antennas)
{
    const XMatrix P = widen(pilots);
    const auto T = P.cols();
    return P.adjoint() * diag_terms(alloc, profile, antennas, true) * P +
           static_cast<Real>(noise_power) * static_cast<Real>(antennas) * XMatrix::Identity(T, T);
}

XMatrix a_x(const ComplexMatrix& pilots, const PowerAllocation& alloc, const LargeScaleProfile& profile,
            std::size_t antennas)
{
    return widen(pilots).adjoint() * diag_terms(alloc, profile, antennas, false);
}

} // namespace

ComplexMatrix cross_covariance(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                               const LargeScaleProfile& profile, std::size_t antennas)
{
    return narrow(a_x(pilots, alloc, profile, antennas));
}

ComplexMatrix observation_covariance(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                                     const LargeScaleProfile& profile, double noise_power,
                                     std::size_t antennas)
{
    return narrow(phi_x(pilots, alloc, profile, noise_power, antennas));
}

ComplexMatrix mmse_estimate_matrix_form(const ComplexMatrix& Y_p, const ComplexMatrix& pilots,
                                        const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                        double noise_power, std::size_t antennas)
{
    const XMatrix phi = phi_x(pilots, alloc, profile, noise_power, antennas);
    const XMatrix A = a_x(pilots, alloc, profile, antennas);
    // Phi is Hermitian positive definite; solve instead of inverting.
    return narrow(widen(Y_p) * phi.ldlt().solve(A));
}

std::vector<double> cee_variance_matrix_form(const ComplexMatrix& pilots, const PowerAllocation& alloc,
                                             const LargeScaleProfile& profile, double noise_power,
                                             std::size_t antennas)
{
    const XMatrix phi = phi_x(pilots, alloc, profile, noise_power, antennas);
    const XMatrix A = a_x(pilots, alloc, profile, antennas);
    const XMatrix q = A.adjoint() * phi.ldlt().solve(A);
    std::vector<double> out(profile.size());
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        const auto i = static_cast<Eigen::Index>(k);
        out[k] = static_cast<double>(static_cast<Real>(profile[k]) - q(i, i).real() / static_cast<Real>(antennas));
    }
    return out;
}

double asinr_direct(std::size_t k, const std::vector<double>& alpha, const std::vector<double>& beta,
                    const std::vector<double>& nu_sq, double noise_power, double antennas)
{
    const std::size_t K = nu_sq.size();
    double denom = noise_power;
    for (std::size_t l = 0; l < K; ++l)
    {
        const double err = noise_power * nu_sq[l] / (noise_power + alpha[l] * nu_sq[l]);
        denom += (l <= k ? err : nu_sq[l]) * beta[l];
    }
    const double err_k = noise_power * nu_sq[k] / (noise_power + alpha[k] * nu_sq[k]);
    return antennas * (nu_sq[k] - err_k) * beta[k] / denom;
}

SystemConfig k2_desk_config()
{
    SystemConfig cfg;
    cfg.antennas = 2;
    cfg.users = 2;
    cfg.pilot_len = 2;
    cfg.data_len = 8;
    cfg.noise_power = 1.0;
    cfg.energy_budget = 10.0;
    cfg.gamma = 0.5;
    cfg.weights = {0.5, 1.0};
    cfg.symbol_duration = 1.0;
    return cfg;
}

LargeScaleProfile k2_desk_profile() { return LargeScaleProfile{{2.0, 1.0}}; }

GridResult k2_grid_search(const SystemConfig& cfg, const LargeScaleProfile& profile,
                          std::size_t points_per_axis, int refine_rounds)
{
    GridResult best;
    if (profile.size() != 2 || points_per_axis < 2)
        return best;

    const double E = cfg.energy_budget / cfg.symbol_duration;
    const double T = static_cast<double>(cfg.pilot_len);
    const double D = static_cast<double>(cfg.data_len);
    const double s2 = cfg.noise_power;
    const double M = static_cast<double>(cfg.antennas);
    const std::size_t P = points_per_axis;

    // Per-user tables over the (u, v) sub-grid; the two users only couple
    // through the denominators, so the 4-D search is a double loop.
    struct Entry
    {
        double u, v, alpha, beta, sig, err_beta, nu_beta;
    };

    std::array<double, 4> lo{0, 0, 0, 0}, hi{1, 1, 1, 1};
    std::array<double, 4> best_uv{0, 0, 0, 0};
    double best_lambda = -1.0;

    for (int round = 0; round <= refine_rounds; ++round)
    {
        std::array<std::vector<Entry>, 2> tab;
        for (std::size_t k = 0; k < 2; ++k)
        {
            const double nu = profile[k];
            tab[k].reserve(P * P);
            for (std::size_t i = 0; i < P; ++i)
            {
                const double u = lo[2 * k] + (hi[2 * k] - lo[2 * k]) * static_cast<double>(i) / static_cast<double>(P - 1);
                const double a = u * E / T;
                const double err = s2 * nu / (s2 + a * nu);
                for (std::size_t j = 0; j < P; ++j)
                {
                    const double v =
                        lo[2 * k + 1] + (hi[2 * k + 1] - lo[2 * k + 1]) * static_cast<double>(j) / static_cast<double>(P - 1);
                    const double b = v * (E - a * T) / D;
                    tab[k].push_back({u, v, a, b, M * (nu - err) * b, err * b, nu * b});
                }
            }
        }

        const double c1 = cfg.weights[0], c2 = cfg.weights[1], g = cfg.gamma;
        std::size_t bi = 0, bj = 0;
        double round_best = -1.0;
        for (std::size_t i = 0; i < tab[0].size(); ++i)
        {
            const Entry& e1 = tab[0][i];
            if (e1.sig <= 0.0)
                continue;
            for (std::size_t j = 0; j < tab[1].size(); ++j)
            {
                const Entry& e2 = tab[1][j];
                const double a1 = e1.sig / (e2.nu_beta + e1.err_beta + s2);
                const double a2 = e2.sig / (e1.err_beta + e2.err_beta + s2);
                if (a1 < g || a2 < g)
                    continue;
                const double lam = std::min(c1 * a1, c2 * a2);
                if (lam > round_best)
                {
                    round_best = lam;
                    bi = i;
                    bj = j;
                }
            }
        }
        best.evaluations += tab[0].size() * tab[1].size();

        if (round_best > best_lambda)
        {
            best_lambda = round_best;
            best_uv = {tab[0][bi].u, tab[0][bi].v, tab[1][bj].u, tab[1][bj].v};
            best.alloc.alpha = {tab[0][bi].alpha, tab[1][bj].alpha};
            best.alloc.beta = {tab[0][bi].beta, tab[1][bj].beta};
        }
        if (best_lambda < 0.0)
            break;

        // zoom: keep two grid steps of the current resolution on each side
        for (std::size_t d = 0; d < 4; ++d)
        {
            const double step = (hi[d] - lo[d]) / static_cast<double>(P - 1);
            lo[d] = std::max(0.0, best_uv[d] - 2.0 * step);
            hi[d] = std::min(1.0, best_uv[d] + 2.0 * step);
        }
    }

    if (best_lambda >= 0.0)
    {
        best.found_feasible = true;
        const std::vector<double>& nu = profile.nu_sq;
        best.lambda = std::min(cfg.weights[0] * asinr_direct(0, best.alloc.alpha, best.alloc.beta, nu, s2, M),
                               cfg.weights[1] * asinr_direct(1, best.alloc.alpha, best.alloc.beta, nu, s2, M));
    }
    return best;
}

RandomScenario random_scenario(RandomSource& rng, std::size_t k_min, std::size_t k_max)
{
    RandomScenario sc;
    SystemConfig& cfg = sc.cfg;
    const auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
    };
    static constexpr std::array<std::size_t, 3> kAntennas{1, 2, 4};
    cfg.users = pick(k_min, k_max);
    cfg.antennas = kAntennas[pick(0, 2)];
    cfg.pilot_len = cfg.users + pick(0, 2);
    cfg.data_len = pick(4, 32);
    cfg.noise_power = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e3)); // 1e-3 .. 1
    cfg.energy_budget = 5.0 + 45.0 * rng.uniform();
    cfg.gamma = 0.02 + 0.3 * rng.uniform();
    cfg.symbol_duration = 1.0;

    cfg.weights.resize(cfg.users);
    for (auto& c : cfg.weights)
        c = 0.1 + rng.uniform();
    std::sort(cfg.weights.begin(), cfg.weights.end());

    sc.profile.nu_sq.resize(cfg.users);
    for (auto& nu : sc.profile.nu_sq)
        nu = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
    std::sort(sc.profile.nu_sq.begin(), sc.profile.nu_sq.end(), std::greater<>());

    const double E = cfg.energy_budget;
    const double T = static_cast<double>(cfg.pilot_len);
    const double D = static_cast<double>(cfg.data_len);
    sc.alloc.alpha.resize(cfg.users);
    sc.alloc.beta.resize(cfg.users);
    for (std::size_t k = 0; k < cfg.users; ++k)
    {
        const double pilot_share = 0.05 + 0.9 * rng.uniform();
        const double used = 0.2 + 0.8 * rng.uniform();
        sc.alloc.alpha[k] = used * pilot_share * E / T;
        sc.alloc.beta[k] = used * (1.0 - pilot_share) * E / D;
    }
    return sc;
}

} // namespace jpa::oracle
