// SPDX-License-Identifier: Apache-2.0
//
// MMSE channel estimation from orthonormal pilots.
//
// With P P^H = I_K the pilot observation decorrelates per user,
// (Y_p P^H)[:,k] = sqrt(alpha_k) h_k + w_k with w_k ~ CN(0, sigma^2 I_M),
// and the MMSE estimate is a per-user scalar gain on that column. The error
// e_k = h_k - hhat_k has per-antenna variance
//
//   sigma_k^2 = sigma^2 nu_k^2 / (sigma^2 + alpha_k nu_k^2)
//
// which is the reduced form of nu_k^2 - (1/M) A_k^H Phi^{-1} A_k.
// ------------------------------------------------------------------------

#ifndef JPA_ESTIMATION_HPP
#define JPA_ESTIMATION_HPP

#include <vector>

#include "jpa/channel.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

struct EstimationResult
{
    ComplexMatrix H_hat;         // M x K
    std::vector<double> cee_var; // sigma_k^2 per antenna entry
};

// Closed-form CEE variance of a single user. Equals nu_sq when alpha == 0.
inline double cee_variance(double alpha, double nu_sq, double noise_power)
{
    return noise_power * nu_sq / (noise_power + alpha * nu_sq);
}

std::vector<double> cee_variances(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                                  double noise_power);

// Variance of each entry of hhat_k: nu_k^2 - sigma_k^2, computed without cancellation.
inline double estimate_variance(double alpha, double nu_sq, double noise_power)
{
    return alpha * nu_sq * nu_sq / (noise_power + alpha * nu_sq);
}

// Largest |(P P^H - I)_{ij}|.
double pilot_gram_deviation(const ComplexMatrix& pilots);

// Throws ConfigError when the pilot Gram matrix deviates from I_K by more than 1e-9.
EstimationResult estimate(const ComplexMatrix& Y_p, const ComplexMatrix& pilots,
                          const PowerAllocation& alloc, const LargeScaleProfile& profile,
                          double noise_power);

// Same as estimate() but writes into a preallocated H_hat and skips the
// pilot check; used in the per-frame simulation loop.
void estimate_into(const ComplexMatrix& Y_p, const ComplexMatrix& pilots_h,
                   const std::vector<double>& gains, ComplexMatrix& H_hat);

// Per-user MMSE gains sqrt(alpha_k) nu_k^2 / (sigma^2 + alpha_k nu_k^2).
std::vector<double> mmse_gains(const PowerAllocation& alloc, const LargeScaleProfile& profile,
                               double noise_power);

} // namespace jpa

#endif
