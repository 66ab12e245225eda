// SPDX-License-Identifier: Apache-2.0
//
// Reproducible random streams.
//
// Every random quantity is drawn from a Xoshiro256** engine whose state is
// derived from (master seed, purpose tag, index) through SplitMix64:
//
//   key   = mix(master ^ mix(tag ^ mix(index)))
//   state = four successive SplitMix64 outputs seeded with key
//
// where mix() is the SplitMix64 finalizer. Monte Carlo frame n of a run uses
// index = n, so results never depend on how frames are split across workers.
// ------------------------------------------------------------------------

#ifndef JPA_RNG_HPP
#define JPA_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace jpa
{

enum class StreamTag : std::uint64_t
{
    UserDrop = 0x64726f70,   // "drop"
    Frame = 0x6672616d,      // "fram"
    Projection = 0x7468726d, // "thrm"
    Scenario = 0x7363656e,   // "scen"
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64
{
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

private:
    std::uint64_t state_;
};

// Xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256ss
{
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256ss(std::uint64_t seed)
    {
        SplitMix64 sm(seed);
        for (auto& w : s_)
            w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

constexpr std::uint64_t stream_key(std::uint64_t master, StreamTag tag, std::uint64_t index)
{
    return splitmix64_mix(master ^ splitmix64_mix(static_cast<std::uint64_t>(tag) ^ splitmix64_mix(index)));
}

inline Xoshiro256ss make_stream(std::uint64_t master, StreamTag tag, std::uint64_t index)
{
    return Xoshiro256ss(stream_key(master, tag, index));
}

// Engine bundled with the distributions a simulation frame needs.
class RandomSource
{
public:
    explicit RandomSource(Xoshiro256ss engine) : engine_(engine) {}

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    std::uint64_t bits() { return engine_(); }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    Xoshiro256ss& engine() { return engine_; }

private:
    Xoshiro256ss engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace jpa

#endif
