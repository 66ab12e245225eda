// SPDX-License-Identifier: Apache-2.0
//
// Inner loops of the link simulator over the D data symbols of a frame.
//
// Complex signals are split into real/imaginary planes. A received block of
// M antennas x D symbols is stored antenna-major: re[m * D + d].
//
// Every kernel exists as a scalar reference and an AVX2 variant. Both perform
// the same IEEE operations in the same order (no FMA contraction; the build
// passes -ffp-contract=off), so their outputs are bit-identical and the
// selection never changes simulation results.
// ------------------------------------------------------------------------

#ifndef JPA_KERNELS_HPP
#define JPA_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <string>

namespace jpa::kernels
{

enum class Isa
{
    Scalar,
    Avx2
};

const char* to_string(Isa isa);

struct KernelTable
{
    // z[d] = sum_m conj(h_m) y_m[d]
    void (*mrc_combine)(const double* h_re, const double* h_im, std::size_t antennas,
                        const double* y_re, const double* y_im, std::size_t len,
                        double* z_re, double* z_im);

    // y_m[d] += g_m s[d] for every antenna m
    void (*rank1_update)(const double* g_re, const double* g_im, std::size_t antennas,
                         const double* s_re, const double* s_im, std::size_t len,
                         double* y_re, double* y_im);

    // Gray QPSK slicer: out = (sign(z_re), sign(z_im)) / sqrt(2), with z == 0
    // mapped to +. Returns the number of bits that differ from tx.
    std::size_t (*qpsk_slice)(const double* z_re, const double* z_im, std::size_t len,
                              const double* tx_re, const double* tx_im,
                              double* out_re, double* out_im);
};

bool cpu_has_avx2();

// Throws std::runtime_error when the ISA is not available on this CPU.
const KernelTable& table(Isa isa);

// Best available ISA, unless JPA_KERNELS=scalar is set in the environment.
Isa default_isa();

namespace detail
{
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
} // namespace detail

} // namespace jpa::kernels

#endif
