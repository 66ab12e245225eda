// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define JPA_AVX2 __attribute__((target("avx2")))

namespace jpa::kernels
{

namespace
{

constexpr double kInvSqrt2 = 0.70710678118654752440;

JPA_AVX2 void mrc_combine_avx2(const double* h_re, const double* h_im, std::size_t antennas,
                               const double* y_re, const double* y_im, std::size_t len,
                               double* z_re, double* z_im)
{
    const std::size_t vec_end = len & ~std::size_t{3};
    for (std::size_t d = 0; d < vec_end; d += 4)
    {
        __m256d zr = _mm256_setzero_pd();
        __m256d zi = _mm256_setzero_pd();
        for (std::size_t m = 0; m < antennas; ++m)
        {
            const __m256d hr = _mm256_set1_pd(h_re[m]);
            const __m256d hi = _mm256_set1_pd(h_im[m]);
            const __m256d yr = _mm256_loadu_pd(y_re + m * len + d);
            const __m256d yi = _mm256_loadu_pd(y_im + m * len + d);
            zr = _mm256_add_pd(zr, _mm256_add_pd(_mm256_mul_pd(hr, yr), _mm256_mul_pd(hi, yi)));
            zi = _mm256_add_pd(zi, _mm256_sub_pd(_mm256_mul_pd(hr, yi), _mm256_mul_pd(hi, yr)));
        }
        _mm256_storeu_pd(z_re + d, zr);
        _mm256_storeu_pd(z_im + d, zi);
    }
    for (std::size_t d = vec_end; d < len; ++d)
    {
        double zr = 0.0, zi = 0.0;
        for (std::size_t m = 0; m < antennas; ++m)
        {
            const double yr = y_re[m * len + d];
            const double yi = y_im[m * len + d];
            zr = zr + ((h_re[m] * yr) + (h_im[m] * yi));
            zi = zi + ((h_re[m] * yi) - (h_im[m] * yr));
        }
        z_re[d] = zr;
        z_im[d] = zi;
    }
}

JPA_AVX2 void rank1_update_avx2(const double* g_re, const double* g_im, std::size_t antennas,
                                const double* s_re, const double* s_im, std::size_t len,
                                double* y_re, double* y_im)
{
    const std::size_t vec_end = len & ~std::size_t{3};
    for (std::size_t m = 0; m < antennas; ++m)
    {
        const __m256d gr = _mm256_set1_pd(g_re[m]);
        const __m256d gi = _mm256_set1_pd(g_im[m]);
        double* yr = y_re + m * len;
        double* yi = y_im + m * len;
        for (std::size_t d = 0; d < vec_end; d += 4)
        {
            const __m256d sr = _mm256_loadu_pd(s_re + d);
            const __m256d si = _mm256_loadu_pd(s_im + d);
            const __m256d dr = _mm256_sub_pd(_mm256_mul_pd(gr, sr), _mm256_mul_pd(gi, si));
            const __m256d di = _mm256_add_pd(_mm256_mul_pd(gr, si), _mm256_mul_pd(gi, sr));
            _mm256_storeu_pd(yr + d, _mm256_add_pd(_mm256_loadu_pd(yr + d), dr));
            _mm256_storeu_pd(yi + d, _mm256_add_pd(_mm256_loadu_pd(yi + d), di));
        }
        for (std::size_t d = vec_end; d < len; ++d)
        {
            yr[d] = yr[d] + ((g_re[m] * s_re[d]) - (g_im[m] * s_im[d]));
            yi[d] = yi[d] + ((g_re[m] * s_im[d]) + (g_im[m] * s_re[d]));
        }
    }
}

JPA_AVX2 std::size_t qpsk_slice_avx2(const double* z_re, const double* z_im, std::size_t len,
                                     const double* tx_re, const double* tx_im,
                                     double* out_re, double* out_im)
{
    const __m256d pos = _mm256_set1_pd(kInvSqrt2);
    const __m256d neg = _mm256_set1_pd(-kInvSqrt2);
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t vec_end = len & ~std::size_t{3};
    std::size_t errors = 0;
    for (std::size_t d = 0; d < vec_end; d += 4)
    {
        const __m256d lt_r = _mm256_cmp_pd(_mm256_loadu_pd(z_re + d), zero, _CMP_LT_OQ);
        const __m256d lt_i = _mm256_cmp_pd(_mm256_loadu_pd(z_im + d), zero, _CMP_LT_OQ);
        const __m256d sr = _mm256_blendv_pd(pos, neg, lt_r);
        const __m256d si = _mm256_blendv_pd(pos, neg, lt_i);
        _mm256_storeu_pd(out_re + d, sr);
        _mm256_storeu_pd(out_im + d, si);
        const int ne_r = _mm256_movemask_pd(_mm256_cmp_pd(sr, _mm256_loadu_pd(tx_re + d), _CMP_NEQ_UQ));
        const int ne_i = _mm256_movemask_pd(_mm256_cmp_pd(si, _mm256_loadu_pd(tx_im + d), _CMP_NEQ_UQ));
        errors += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(ne_r)) +
                                           __builtin_popcount(static_cast<unsigned>(ne_i)));
    }
    for (std::size_t d = vec_end; d < len; ++d)
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
const KernelTable avx2_table{&mrc_combine_avx2, &rank1_update_avx2, &qpsk_slice_avx2};
}

} // namespace jpa::kernels

#endif
