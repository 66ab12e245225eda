// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/estimation.hpp"

#include <cmath>

#include <fmt/core.h>

namespace jpa
{

std::vector<double> cee_variances(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                  double noise_power)
{
    std::vector<double> out(profile.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = cee_variance(alloc.alpha[k], profile[k], noise_power);
    return out;
}

std::vector<double> mmse_gains(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                               double noise_power)
{
    std::vector<double> g(profile.size());
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        const double a = alloc.alpha[k];
        g[k] = std::sqrt(a) * profile[k] / (noise_power + a * profile[k]);
    }
    return g;
}

double pilot_gram_deviation(const ComplexMatrix& pilots)
{
    const ComplexMatrix gram = pilots * pilots.adjoint();
    return (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void estimate_into(const ComplexMatrix& Y_p, const ComplexMatrix& pilots_h,
                   const std::vector<double>& gains, ComplexMatrix& H_hat)
{
    H_hat.noalias() = Y_p * pilots_h;
    for (Eigen::Index k = 0; k < H_hat.cols(); ++k)
        H_hat.col(k) *= gains[static_cast<std::size_t>(k)];
}

EstimationResult estimate(const ComplexMatrix& Y_p, const ComplexMatrix& pilots,
                          const PowerAllocation& alloc, const LargeScaleProfile& profile,
                          double noise_power)
{
    const auto K = static_cast<Eigen::Index>(profile.size());
    if (pilots.rows() != K || Y_p.cols() != pilots.cols() || alloc.size() != profile.size())
        throw ConfigError("estimate: inconsistent dimensions");
    const double dev = pilot_gram_deviation(pilots);
    if (dev > 1e-9)
        throw ConfigError(fmt::format("pilot matrix is not row-orthonormal (Gram deviation {:.3g})", dev));

    EstimationResult out;
    const ComplexMatrix pilots_h = pilots.adjoint();
    estimate_into(Y_p, pilots_h, mmse_gains(alloc, profile, noise_power), out.H_hat);
    out.cee_var = cee_variances(alloc, profile, noise_power);
    return out;
}

} // namespace jpa
