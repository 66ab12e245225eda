// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/link_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/core.h>

#include "jpa/channel.hpp"
#include "jpa/estimation.hpp"
#include "jpa/rng.hpp"

namespace jpa
{

const char* to_string(SicMode m)
{
    return m == SicMode::Genie ? "genie" : "detected";
}

SicMode parse_sic_mode(const std::string& s)
{
    if (s == "genie")
        return SicMode::Genie;
    if (s == "detected")
        return SicMode::Detected;
    throw ConfigError(fmt::format("unknown sic mode '{}'", s));
}

namespace
{

constexpr std::size_t kChunkFrames = 256;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Moments
{
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x)
    {
        sum += x;
        sum_sq += x * x;
    }
    void merge(const Moments& o)
    {
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean(double n) const { return sum / n; }
    double stderr_of_mean(double n) const
    {
        const double m = sum / n;
        return std::sqrt(std::max(0.0, sum_sq / n - m * m) / n);
    }
};

struct UserAcc
{
    std::uint64_t errors = 0;
    std::uint64_t degenerate = 0;
    Moments frame_errors, s, G, Q, sinr;

    void merge(const UserAcc& o)
    {
        errors += o.errors;
        degenerate += o.degenerate;
        frame_errors.merge(o.frame_errors);
        s.merge(o.s);
        G.merge(o.G);
        Q.merge(o.Q);
        sinr.merge(o.sinr);
    }
};

class FrameSimulator
{
public:
    FrameSimulator(const SimJob& job, const kernels::KernelTable& kt)
        : job_(job), kt_(kt), M_(job.cfg.antennas), K_(job.cfg.users), T_(job.cfg.pilot_len),
          D_(job.cfg.data_len)
    {
        const ComplexMatrix P = pilot_matrix(K_, T_);
        pilots_h_ = P.adjoint();
        ComplexMatrix sqrt_alpha_diag = ComplexMatrix::Zero(static_cast<Eigen::Index>(K_), static_cast<Eigen::Index>(K_));
        for (std::size_t k = 0; k < K_; ++k)
            sqrt_alpha_diag(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = std::sqrt(job.alloc.alpha[k]);
        weighted_pilots_ = sqrt_alpha_diag * P;
        gains_ = mmse_gains(job.alloc, job.profile, job.cfg.noise_power);
        sqrt_beta_.resize(K_);
        for (std::size_t k = 0; k < K_; ++k)
            sqrt_beta_[k] = std::sqrt(job.alloc.beta[k]);

        y_re_.resize(M_ * D_);
        y_im_.resize(M_ * D_);
        tx_re_.resize(K_ * D_);
        tx_im_.resize(K_ * D_);
        z_re_.resize(D_);
        z_im_.resize(D_);
        det_re_.resize(D_);
        det_im_.resize(D_);
        g_re_.resize(M_);
        g_im_.resize(M_);
    }

    void run_frame(std::uint64_t n, std::vector<UserAcc>& acc)
    {
        const double s2 = job_.cfg.noise_power;
        RandomSource rng(make_stream(job_.seed, StreamTag::Frame, n));

        draw_channel_matrix(job_.profile, M_, rng, H_);

        // pilot phase: Y_p = H diag(sqrt(alpha)) P + Z_p
        Yp_.noalias() = H_ * weighted_pilots_;
        for (Eigen::Index t = 0; t < Yp_.cols(); ++t)
            for (Eigen::Index m = 0; m < Yp_.rows(); ++m)
                Yp_(m, t) += rng.complex_normal(s2);
        estimate_into(Yp_, pilots_h_, gains_, Hhat_);

        const InstantSinr terms = instantaneous_sinr(H_, Hhat_, job_.alloc, s2);

        // Gray QPSK data, two bits per symbol from 64-bit words
        for (std::size_t k = 0; k < K_; ++k)
        {
            std::uint64_t word = 0;
            for (std::size_t d = 0; d < D_; ++d)
            {
                if (d % 32 == 0)
                    word = rng.bits();
                tx_re_[k * D_ + d] = (word & 1u) ? -kInvSqrt2 : kInvSqrt2;
                tx_im_[k * D_ + d] = (word & 2u) ? -kInvSqrt2 : kInvSqrt2;
                word >>= 2;
            }
        }

        // data phase: Y_d = H B D + Z_d
        for (std::size_t i = 0; i < M_ * D_; ++i)
        {
            const auto z = rng.complex_normal(s2);
            y_re_[i] = z.real();
            y_im_[i] = z.imag();
        }
        for (std::size_t k = 0; k < K_; ++k)
        {
            load_column(H_, k, sqrt_beta_[k]);
            kt_.rank1_update(g_re_.data(), g_im_.data(), M_, &tx_re_[k * D_], &tx_im_[k * D_], D_,
                             y_re_.data(), y_im_.data());
        }

        // MRC-SIC in descending large-scale order
        for (std::size_t k = 0; k < K_; ++k)
        {
            UserAcc& a = acc[k];
            const double* txr = &tx_re_[k * D_];
            const double* txi = &tx_im_[k * D_];
            std::size_t errors = 0;

            if (terms.degenerate[k])
            {
                ++a.degenerate;
                std::uint64_t word = 0;
                for (std::size_t d = 0; d < D_; ++d)
                {
                    if (d % 32 == 0)
                        word = rng.bits();
                    det_re_[d] = (word & 1u) ? -kInvSqrt2 : kInvSqrt2;
                    det_im_[d] = (word & 2u) ? -kInvSqrt2 : kInvSqrt2;
                    errors += (det_re_[d] != txr[d]) + (det_im_[d] != txi[d]);
                    word >>= 2;
                }
            }
            else
            {
                load_column(Hhat_, k, 1.0);
                kt_.mrc_combine(g_re_.data(), g_im_.data(), M_, y_re_.data(), y_im_.data(), D_,
                                z_re_.data(), z_im_.data());
                errors = kt_.qpsk_slice(z_re_.data(), z_im_.data(), D_, txr, txi, det_re_.data(), det_im_.data());
                a.s.add(terms.s[k]);
                a.G.add(terms.G[k]);
                a.Q.add(terms.Q[k]);
                a.sinr.add(terms.sinr[k]);
            }
            a.errors += errors;
            a.frame_errors.add(static_cast<double>(errors));

            if (k + 1 < K_)
            {
                // cancel user k with its estimated channel
                load_column(Hhat_, k, -sqrt_beta_[k]);
                const bool genie = job_.sic_mode == SicMode::Genie;
                kt_.rank1_update(g_re_.data(), g_im_.data(), M_, genie ? txr : det_re_.data(),
                                 genie ? txi : det_im_.data(), D_, y_re_.data(), y_im_.data());
            }
        }
    }

private:
    void load_column(const ComplexMatrix& A, std::size_t k, double scale)
    {
        for (std::size_t m = 0; m < M_; ++m)
        {
            const auto v = A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
            g_re_[m] = v.real() * scale;
            g_im_[m] = v.imag() * scale;
        }
    }

    const SimJob& job_;
    const kernels::KernelTable& kt_;
    std::size_t M_, K_, T_, D_;
    ComplexMatrix pilots_h_, weighted_pilots_, H_, Yp_, Hhat_;
    std::vector<double> gains_, sqrt_beta_;
    std::vector<double> y_re_, y_im_, tx_re_, tx_im_, z_re_, z_im_, det_re_, det_im_, g_re_, g_im_;
};

void validate_job(const SimJob& job)
{
    validate_system_config(job.cfg);
    if (job.n_frames == 0)
        throw ConfigError("n_frames must be >= 1");
    if (job.profile.size() != job.cfg.users)
        throw ConfigError("profile size does not match K");
    if (job.alloc.alpha.size() != job.cfg.users || job.alloc.beta.size() != job.cfg.users)
        throw ConfigError("allocation size does not match K");
    for (std::size_t k = 0; k < job.cfg.users; ++k)
        if (!(job.alloc.alpha[k] >= 0.0) || !(job.alloc.beta[k] >= 0.0))
            throw ConfigError("allocation powers must be non-negative");
}

} // namespace

SimReport run(const SimJob& job)
{
    validate_job(job);
    const kernels::KernelTable& kt = kernels::table(job.isa.value_or(kernels::default_isa()));
    const std::size_t K = job.cfg.users;
    const std::size_t n_chunks = (job.n_frames + kChunkFrames - 1) / kChunkFrames;

    std::vector<std::vector<UserAcc>> chunk_acc(n_chunks, std::vector<UserAcc>(K));
    std::atomic<std::size_t> next_chunk{0};

    auto worker = [&]() {
        FrameSimulator sim(job, kt);
        for (;;)
        {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks)
                return;
            const std::size_t begin = c * kChunkFrames;
            const std::size_t end = std::min(job.n_frames, begin + kChunkFrames);
            for (std::size_t n = begin; n < end; ++n)
                sim.run_frame(n, chunk_acc[c]);
        }
    };

    unsigned workers = job.workers ? job.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));
    if (workers <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::vector<UserAcc> total(K);
    for (const auto& chunk : chunk_acc)
        for (std::size_t k = 0; k < K; ++k)
            total[k].merge(chunk[k]);

    SimReport r;
    r.n_frames = job.n_frames;
    r.analytic = asinr_closed_form(job.alloc, job.profile, job.cfg);
    r.analytic_asinr = r.analytic.asinr;
    const double s2 = job.cfg.noise_power;
    const double frames = static_cast<double>(job.n_frames);
    const double bits_per_frame = 2.0 * static_cast<double>(job.cfg.data_len);
    for (std::size_t k = 0; k < K; ++k)
    {
        const UserAcc& a = total[k];
        // degenerate frames contribute s = G = Q = 0 and SINR = 0
        r.mean_signal.push_back(a.s.mean(frames));
        r.mean_iui.push_back(a.G.mean(frames));
        r.mean_residual.push_back(a.Q.mean(frames));
        r.signal_stderr.push_back(a.s.stderr_of_mean(frames));
        r.iui_stderr.push_back(a.G.stderr_of_mean(frames));
        r.residual_stderr.push_back(a.Q.stderr_of_mean(frames));
        r.empirical_asinr.push_back(r.mean_signal[k] / (r.mean_iui[k] + r.mean_residual[k] + s2));
        r.mean_sinr.push_back(a.sinr.mean(frames));
        r.mean_sinr_stderr.push_back(a.sinr.stderr_of_mean(frames));

        const std::uint64_t bits = 2ull * job.cfg.data_len * job.n_frames;
        r.bit_counts.push_back(bits);
        r.bit_errors.push_back(a.errors);
        r.ber.push_back(static_cast<double>(a.errors) / static_cast<double>(bits));
        r.ber_stderr.push_back(a.frame_errors.stderr_of_mean(frames) / bits_per_frame);
        r.degenerate_frames.push_back(a.degenerate);
    }
    try
    {
        const auto w = weighted_asinr(r.analytic, job.cfg.weights);
        r.jfi_weighted = jain_index(w);
    }
    catch (const std::invalid_argument&)
    {
        r.jfi_weighted = 0.0;
    }
    return r;
}

std::vector<SweepRow> sweep_energy(const SystemConfig& cfg_template, const LargeScaleProfile& profile,
                                   const SweepSpec& spec, const GpOptions& opts)
{
    if (!std::is_sorted(spec.energy_values.begin(), spec.energy_values.end()))
        throw ConfigError("energy grid must be ascending");
    if (spec.n_frames == 0)
        throw ConfigError("n_frames must be >= 1");

    std::vector<Scheme> schemes = spec.schemes;
    std::sort(schemes.begin(), schemes.end(),
              [](Scheme a, Scheme b) { return std::string(to_string(a)) < std::string(to_string(b)); });

    std::vector<SweepRow> rows;
    for (Scheme scheme : schemes)
    {
        for (double e : spec.energy_values)
        {
            SystemConfig cfg = cfg_template;
            cfg.energy_budget = e;
            const Solution sol = solve_scheme(scheme, cfg, profile, opts);

            std::optional<SimReport> rep;
            if (sol.feasible())
            {
                SimJob job{cfg, profile, sol.alloc, spec.n_frames, spec.sic_mode, spec.seed, spec.workers, spec.isa};
                rep = run(job);
            }
            for (std::size_t k = 0; k < cfg.users; ++k)
            {
                SweepRow row;
                row.scheme = scheme;
                row.energy_budget = e;
                row.user = k + 1;
                row.status = sol.status;
                row.feasible = sol.feasible();
                row.lambda_star = sol.lambda_star;
                if (rep)
                {
                    row.alpha = sol.alloc.alpha[k];
                    row.beta = sol.alloc.beta[k];
                    row.analytic_asinr = rep->analytic_asinr[k];
                    row.empirical_asinr = rep->empirical_asinr[k];
                    row.ber = rep->ber[k];
                    row.ber_stderr = rep->ber_stderr[k];
                    row.errors = rep->bit_errors[k];
                    row.bits = rep->bit_counts[k];
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

} // namespace jpa
