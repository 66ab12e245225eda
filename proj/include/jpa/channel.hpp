// SPDX-License-Identifier: Apache-2.0
//
// Large-scale fading from cell geometry, i.i.d. Rayleigh small-scale channels
// and the orthonormal pilot matrix.
// ------------------------------------------------------------------------

#ifndef JPA_CHANNEL_HPP
#define JPA_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jpa/rng.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct CellGeometry
{
    double radius = 400.0;        // [m]
    double min_distance = 35.0;   // [m], keeps users away from the path-loss singularity
    std::string pathloss_model = "3gpp-urban";
    double shadowing_std_db = 0.0; // log-normal shadowing, off when 0

    void validate() const;
};

// 3GPP urban macro path loss: 128.1 + 37.6 log10(d / 1 km) dB.
double pathloss_db(double distance_m);

struct UserDrop
{
    LargeScaleProfile profile;      // descending
    std::vector<double> distance_m; // aligned with profile
};

// Places K users area-uniformly over the annulus [min_distance, radius] and
// converts their path loss (plus optional shadowing) to linear gains.
UserDrop draw_user_drop_detailed(const CellGeometry& geom, std::size_t users, std::uint64_t seed);

inline LargeScaleProfile draw_user_drop(const CellGeometry& geom, std::size_t users, std::uint64_t seed)
{
    return draw_user_drop_detailed(geom, users, seed).profile;
}

struct ChannelRealization
{
    ComplexMatrix H; // M x K, column k = h_k
    std::uint64_t frame_index = 0;
};

// Fills H (resized to M x K) with H[m,k] ~ CN(0, nu_k^2), column by column.
void draw_channel_matrix(const LargeScaleProfile& profile, std::size_t antennas,
                         RandomSource& rng, ComplexMatrix& H);

// Frame n draws from make_stream(seed, StreamTag::Frame, n); the link
// simulator uses the same stream, so its channels coincide with these.
std::vector<ChannelRealization> draw_channels(const LargeScaleProfile& profile, std::size_t antennas,
                                              std::size_t n_frames, std::uint64_t seed);

// K x T matrix of the first K rows of the normalized T-point DFT, so that
// P P^H = I_K. Throws ConfigError if T < K.
ComplexMatrix pilot_matrix(std::size_t users, std::size_t pilot_len);

} // namespace jpa

#endif
