// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

namespace jpa
{

void CellGeometry::validate() const
{
    if (!(radius > 0.0))
        throw ConfigError("cell radius must be positive");
    if (!(min_distance >= 0.0) || !(min_distance < radius))
        throw ConfigError(fmt::format("need radius > min_distance >= 0 (radius={}, min_distance={})",
                                      radius, min_distance));
    if (pathloss_model != "3gpp-urban")
        throw ConfigError(fmt::format("unknown pathloss_model '{}'", pathloss_model));
    if (!(shadowing_std_db >= 0.0))
        throw ConfigError("shadowing_std_db must be non-negative");
}

double pathloss_db(double distance_m)
{
    return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

UserDrop draw_user_drop_detailed(const CellGeometry& geom, std::size_t users, std::uint64_t seed)
{
    geom.validate();
    RandomSource rng(make_stream(seed, StreamTag::UserDrop, 0));

    const double r0_sq = geom.min_distance * geom.min_distance;
    const double r1_sq = geom.radius * geom.radius;

    std::vector<double> dist(users), gain(users);
    for (std::size_t k = 0; k < users; ++k)
    {
        const double u = rng.uniform();
        dist[k] = std::sqrt(r0_sq + u * (r1_sq - r0_sq));
        double loss = pathloss_db(dist[k]);
        if (geom.shadowing_std_db > 0.0)
            loss += geom.shadowing_std_db * rng.normal();
        gain[k] = db_to_linear(-loss);
    }

    std::vector<std::size_t> order(users);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });

    UserDrop out;
    out.profile.nu_sq.resize(users);
    out.distance_m.resize(users);
    for (std::size_t k = 0; k < users; ++k)
    {
        out.profile.nu_sq[k] = gain[order[k]];
        out.distance_m[k] = dist[order[k]];
    }
    return out;
}

void draw_channel_matrix(const LargeScaleProfile& profile, std::size_t antennas,
                         RandomSource& rng, ComplexMatrix& H)
{
    const auto K = static_cast<Eigen::Index>(profile.size());
    const auto M = static_cast<Eigen::Index>(antennas);
    H.resize(M, K);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index m = 0; m < M; ++m)
            H(m, k) = rng.complex_normal(profile.nu_sq[static_cast<std::size_t>(k)]);
}

std::vector<ChannelRealization> draw_channels(const LargeScaleProfile& profile, std::size_t antennas,
                                              std::size_t n_frames, std::uint64_t seed)
{
    std::vector<ChannelRealization> out(n_frames);
    for (std::size_t n = 0; n < n_frames; ++n)
    {
        RandomSource rng(make_stream(seed, StreamTag::Frame, n));
        draw_channel_matrix(profile, antennas, rng, out[n].H);
        out[n].frame_index = n;
    }
    return out;
}

ComplexMatrix pilot_matrix(std::size_t users, std::size_t pilot_len)
{
    if (pilot_len < users)
        throw ConfigError(fmt::format("T < K: cannot build {} orthogonal pilots of length {}", users, pilot_len));
    const auto K = static_cast<Eigen::Index>(users);
    const auto T = static_cast<Eigen::Index>(pilot_len);
    const double scale = 1.0 / std::sqrt(static_cast<double>(pilot_len));
    ComplexMatrix P(K, T);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index t = 0; t < T; ++t)
        {
            // reduce k*t mod T first so the phase stays in [0, 2pi)
            const auto idx = static_cast<double>((k * t) % T);
            const double phase = -2.0 * std::numbers::pi * idx / static_cast<double>(T);
            P(k, t) = std::polar(scale, phase);
        }
    return P;
}

} // namespace jpa
