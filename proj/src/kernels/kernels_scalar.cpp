// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/kernels.hpp"

namespace jpa::kernels
{

namespace
{

constexpr double kInvSqrt2 = 0.70710678118654752440;

void mrc_combine_scalar(const double* h_re, const double* h_im, std::size_t antennas,
                        const double* y_re, const double* y_im, std::size_t len,
                        double* z_re, double* z_im)
{
    for (std::size_t d = 0; d < len; ++d)
    {
        z_re[d] = 0.0;
        z_im[d] = 0.0;
    }
    for (std::size_t m = 0; m < antennas; ++m)
    {
        const double hr = h_re[m];
        const double hi = h_im[m];
        const double* yr = y_re + m * len;
        const double* yi = y_im + m * len;
        for (std::size_t d = 0; d < len; ++d)
        {
            z_re[d] = z_re[d] + ((hr * yr[d]) + (hi * yi[d]));
            z_im[d] = z_im[d] + ((hr * yi[d]) - (hi * yr[d]));
        }
    }
}

void rank1_update_scalar(const double* g_re, const double* g_im, std::size_t antennas,
                         const double* s_re, const double* s_im, std::size_t len,
                         double* y_re, double* y_im)
{
    for (std::size_t m = 0; m < antennas; ++m)
    {
        const double gr = g_re[m];
        const double gi = g_im[m];
        double* yr = y_re + m * len;
        double* yi = y_im + m * len;
        for (std::size_t d = 0; d < len; ++d)
        {
            yr[d] = yr[d] + ((gr * s_re[d]) - (gi * s_im[d]));
            yi[d] = yi[d] + ((gr * s_im[d]) + (gi * s_re[d]));
        }
    }
}

std::size_t qpsk_slice_scalar(const double* z_re, const double* z_im, std::size_t len,
                              const double* tx_re, const double* tx_im,
                              double* out_re, double* out_im)
{
    std::size_t errors = 0;
    for (std::size_t d = 0; d < len; ++d)
    {
        out_re[d] = z_re[d] < 0.0 ? -kInvSqrt2 : kInvSqrt2;
        out_im[d] = z_im[d] < 0.0 ? -kInvSqrt2 : kInvSqrt2;
        errors += (out_re[d] != tx_re[d]) + (out_im[d] != tx_im[d]);
    }
    return errors;
}

} // namespace

namespace detail
{
const KernelTable scalar_table{&mrc_combine_scalar, &rank1_update_scalar, &qpsk_slice_scalar};
}

} // namespace jpa::kernels
