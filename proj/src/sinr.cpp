// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/sinr.hpp"

#include <cmath>

#include "jpa/rng.hpp"

namespace jpa
{

AsinrBreakdown asinr_closed_form(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                 const SystemConfig& cfg)
{
    const std::size_t K = profile.size();
    const double M = static_cast<double>(cfg.antennas);
    const double s2 = cfg.noise_power;

    AsinrBreakdown b;
    b.signal.resize(K);
    b.iui.assign(K, 0.0);
    b.residual.assign(K, 0.0);
    b.asinr.resize(K);

    // suffix sums of nu_l^2 beta_l (l > k), prefix sums of sigma_l^2 beta_l (l <= k)
    double prefix = 0.0;
    for (std::size_t k = 0; k < K; ++k)
    {
        prefix += cee_variance(alloc.alpha[k], profile[k], s2) * alloc.beta[k];
        b.residual[k] = prefix;
    }
    double suffix = 0.0;
    for (std::size_t k = K; k-- > 0;)
    {
        b.iui[k] = suffix;
        suffix += profile[k] * alloc.beta[k];
    }
    for (std::size_t k = 0; k < K; ++k)
    {
        b.signal[k] = M * estimate_variance(alloc.alpha[k], profile[k], s2) * alloc.beta[k];
        b.asinr[k] = b.signal[k] / (b.iui[k] + b.residual[k] + s2);
    }
    return b;
}

std::vector<double> weighted_asinr(const AsinrBreakdown& b, const std::vector<double>& weights)
{
    std::vector<double> w(b.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = weights[k] * b.asinr[k];
    return w;
}

InstantSinr instantaneous_sinr(const ComplexMatrix& H, const ComplexMatrix& H_hat,
                               const PowerAllocation& alloc, double noise_power)
{
    const auto K = H.cols();
    const auto Ku = static_cast<std::size_t>(K);
    InstantSinr out;
    out.s.assign(Ku, 0.0);
    out.G.assign(Ku, 0.0);
    out.Q.assign(Ku, 0.0);
    out.sinr.assign(Ku, 0.0);
    out.degenerate.assign(Ku, false);

    const ComplexMatrix E = H - H_hat;
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const auto ku = static_cast<std::size_t>(k);
        const double norm_sq = H_hat.col(k).squaredNorm();
        if (norm_sq == 0.0)
        {
            out.degenerate[ku] = true;
            continue;
        }
        out.s[ku] = norm_sq * alloc.beta[ku];
        for (Eigen::Index l = k + 1; l < K; ++l)
            out.G[ku] += std::norm(H_hat.col(k).dot(H.col(l))) / norm_sq * alloc.beta[static_cast<std::size_t>(l)];
        for (Eigen::Index l = 0; l <= k; ++l)
            out.Q[ku] += std::norm(H_hat.col(k).dot(E.col(l))) / norm_sq * alloc.beta[static_cast<std::size_t>(l)];
        out.sinr[ku] = out.s[ku] / (out.G[ku] + out.Q[ku] + noise_power);
    }
    return out;
}

ProjectionStats projection_sample(double var_x, std::size_t antennas, std::size_t samples,
                                std::uint64_t seed, ProbeDistribution probe)
{
    RandomSource rng(make_stream(seed, StreamTag::Projection, 0));
    const auto M = static_cast<Eigen::Index>(antennas);
    ComplexVector x(M), y(M);

    std::complex<double> sum_phi{0.0, 0.0};
    double sum_p = 0.0, sum_pp = 0.0, sum_q = 0.0, sum_qq = 0.0, sum_pq = 0.0;
    for (std::size_t i = 0; i < samples; ++i)
    {
        if (probe == ProbeDistribution::Fixed)
        {
            y.setZero();
            y(0) = 1.0;
        }
        else
        {
            const double r = std::exp(0.5 * rng.normal());
            for (Eigen::Index m = 0; m < M; ++m)
                y(m) = r * rng.complex_normal(1.0);
        }
        for (Eigen::Index m = 0; m < M; ++m)
            x(m) = rng.complex_normal(var_x);

        const double y_norm_sq = y.squaredNorm();
        const std::complex<double> phi = y.dot(x) / std::sqrt(y_norm_sq);
        const double p = std::norm(phi);
        sum_phi += phi;
        sum_p += p;
        sum_pp += p * p;
        sum_q += y_norm_sq;
        sum_qq += y_norm_sq * y_norm_sq;
        sum_pq += p * y_norm_sq;
    }

    const double n = static_cast<double>(samples);
    ProjectionStats st;
    st.samples = samples;
    st.mean = sum_phi / n;
    st.mean_abs_bound = 3.0 * std::sqrt(var_x) / std::sqrt(n);
    st.variance = sum_p / n - std::norm(st.mean);
    const double cov = sum_pq / n - (sum_p / n) * (sum_q / n);
    const double var_p = sum_pp / n - (sum_p / n) * (sum_p / n);
    const double var_q = sum_qq / n - (sum_q / n) * (sum_q / n);
    st.corr_stderr = 1.0 / std::sqrt(n);
    if (var_q <= 1e-12 * (sum_qq / n) || probe == ProbeDistribution::Fixed)
    {
        st.corr_defined = false;
        st.corr = 0.0;
    }
    else
    {
        st.corr = cov / std::sqrt(var_p * var_q);
    }
    return st;
}

} // namespace jpa
