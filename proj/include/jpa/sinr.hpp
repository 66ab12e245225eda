// SPDX-License-Identifier: Apache-2.0
//
// SINR of MRC-SIC detection under channel estimation error.
//
// At SIC step k the receiver combines with hhat_k after cancelling users
// 1..k-1 with their estimated channels. Normalising by hhat_k^H hhat_k:
//
//   s_k = |hhat_k|^2 beta_k
//   G_k = sum_{l>k}  |hhat_k^H h_l|^2 / |hhat_k|^2 beta_l      (not yet decoded)
//   Q_k = sum_{l<=k} |hhat_k^H e_l|^2 / |hhat_k|^2 beta_l      (estimation error)
//
// The ASINR used for design is the ratio of expectations
// E{s}/(E{G} + E{Q} + sigma^2), a lower bound of E{s/(G+Q+sigma^2)}.
// ------------------------------------------------------------------------

#ifndef JPA_SINR_HPP
#define JPA_SINR_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "jpa/channel.hpp"
#include "jpa/estimation.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

struct AsinrBreakdown
{
    std::vector<double> signal;   // E{s_k}
    std::vector<double> iui;      // E{G_k}
    std::vector<double> residual; // E{Q_k}
    std::vector<double> asinr;    // linear

    std::size_t size() const { return asinr.size(); }
};

// Closed-form ASINR of every user in SIC order.
AsinrBreakdown asinr_closed_form(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                 const SystemConfig& cfg);

// Convenience: c_k * ASINR_k.
std::vector<double> weighted_asinr(const AsinrBreakdown& b, const std::vector<double>& weights);

struct InstantSinr
{
    std::vector<double> s, G, Q, sinr;
    std::vector<bool> degenerate; // hhat_k == 0, sinr defined as 0
};

// Per-frame SINR terms from true channels H and estimates H_hat.
InstantSinr instantaneous_sinr(const ComplexMatrix& H, const ComplexMatrix& H_hat,
                               const PowerAllocation& alloc, double noise_power);

enum class ProbeDistribution
{
    Fixed,      // y = [1, 0, ..., 0]
    HeavyTailed // y = r u, u ~ CN(0, I_M), log r ~ N(0, 1/4)
};

struct ProjectionStats
{
    std::size_t samples = 0;
    std::complex<double> mean;
    double mean_abs_bound = 0.0;  // 3 sigma_x / sqrt(n)
    double variance = 0.0;        // E|phi - mean|^2
    double corr = 0.0;            // Pearson corr(|phi|^2, |y|^2)
    double corr_stderr = 0.0;     // 1/sqrt(n) under independence
    bool corr_defined = true;     // false when |y|^2 is constant
};

// Draws x ~ CN(0, var_x I_M) independent of y and returns statistics of the
// projection phi = y^H x / |y|: zero mean, variance var_x, independent of y.
ProjectionStats projection_sample(double var_x, std::size_t antennas, std::size_t samples,
                                std::uint64_t seed,
                                ProbeDistribution probe = ProbeDistribution::HeavyTailed);

} // namespace jpa

#endif
