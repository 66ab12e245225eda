#include <doctest.h>

#include <cmath>

#include "jpa/link_sim.hpp"
#include "jpa/scenario_file.hpp"

using namespace jpa;

namespace
{

Scenario drop12()
{
    return resolve_scenario(ScenarioSpec{});
}

SimJob reference_job(std::size_t frames, SicMode mode)
{
    const Scenario sc = drop12();
    const Solution s = solve_jpa(sc.cfg, sc.profile);
    REQUIRE(s.feasible());
    return SimJob{sc.cfg, sc.profile, s.alloc, frames, mode, 7, 0, std::nullopt};
}

void require_identical(const SimReport& a, const SimReport& b)
{
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.mean_signal == b.mean_signal);
    CHECK(a.mean_iui == b.mean_iui);
    CHECK(a.mean_residual == b.mean_residual);
    CHECK(a.mean_sinr == b.mean_sinr);
    CHECK(a.ber_stderr == b.ber_stderr);
}

} // namespace

TEST_CASE("single user at very high SNR makes no errors")
{
    SystemConfig cfg;
    cfg.users = 1;
    cfg.pilot_len = 1;
    cfg.data_len = 32;
    cfg.noise_power = 1e-12;
    cfg.weights = {1.0};
    const SimJob job{cfg, LargeScaleProfile{{1.0}}, PowerAllocation{{1.0}, {1.0}}, 2000, SicMode::Detected, 1, 1,
                     std::nullopt};
    const SimReport r = run(job);
    CHECK(r.bit_errors[0] == 0);
    CHECK(r.ber[0] == 0.0);
    CHECK(r.bit_counts[0] == 2 * 32 * 2000);
    CHECK(r.degenerate_frames[0] == 0);
}

TEST_CASE("bit accounting and report shape")
{
    const SimReport r = run(reference_job(3000, SicMode::Detected));
    REQUIRE(r.ber.size() == 4);
    CHECK(r.n_frames == 3000);
    for (std::size_t k = 0; k < 4; ++k)
    {
        CHECK(r.bit_counts[k] == 2ull * 96 * 3000);
        CHECK(r.bit_errors[k] <= r.bit_counts[k]);
        CHECK(r.ber[k] == static_cast<double>(r.bit_errors[k]) / static_cast<double>(r.bit_counts[k]));
        CHECK(r.ber_stderr[k] > 0.0);
    }
    CHECK(r.jfi_weighted > 0.0);
    CHECK(r.jfi_weighted <= 1.0);
}

TEST_CASE("results do not depend on worker count or kernel ISA")
{
    SimJob job = reference_job(1100, SicMode::Detected); // not a multiple of the chunk size
    job.workers = 1;
    job.isa = kernels::Isa::Scalar;
    const SimReport base = run(job);
    job.workers = 3;
    require_identical(base, run(job));
    if (kernels::cpu_has_avx2())
    {
        job.isa = kernels::Isa::Avx2;
        require_identical(base, run(job));
        job.workers = 1;
        require_identical(base, run(job));
    }
    job.seed = 8;
    CHECK(run(job).mean_signal != base.mean_signal);
}

TEST_CASE("genie cancellation is never worse than detected cancellation")
{
    const SimReport g = run(reference_job(20000, SicMode::Genie));
    const SimReport d = run(reference_job(20000, SicMode::Detected));
    // the first user sees no cancellation, so both modes agree exactly
    CHECK(g.bit_errors[0] == d.bit_errors[0]);
    for (std::size_t k = 1; k < 4; ++k)
    {
        CAPTURE(k);
        const double se = std::hypot(g.ber_stderr[k], d.ber_stderr[k]);
        CHECK(g.ber[k] <= d.ber[k] + 3.0 * se);
    }
}

TEST_CASE("genie-mode SINR terms agree with the closed form")
{
    const SimReport r = run(reference_job(100000, SicMode::Genie));
    for (std::size_t k = 0; k < 4; ++k)
    {
        CAPTURE(k);
        CHECK(r.mean_signal[k] == doctest::Approx(r.analytic.signal[k]).epsilon(0.02));
        if (k + 1 < 4)
            CHECK(r.mean_iui[k] == doctest::Approx(r.analytic.iui[k]).epsilon(0.02));
        else
            CHECK(r.mean_iui[k] == 0.0);
        CHECK(r.mean_residual[k] == doctest::Approx(r.analytic.residual[k]).epsilon(0.02));
        CHECK(r.empirical_asinr[k] == doctest::Approx(r.analytic_asinr[k]).epsilon(0.02));

        // the closed form lower-bounds the mean instantaneous SINR
        CHECK(r.mean_sinr[k] >= r.analytic_asinr[k] - 3.0 * r.mean_sinr_stderr[k]);
        MESSAGE("user " << k + 1 << ": mean SINR exceeds ASINR by "
                        << linear_to_db(r.mean_sinr[k]) - linear_to_db(r.analytic_asinr[k]) << " dB");
    }
}

TEST_CASE("invalid jobs are rejected")
{
    SimJob job = reference_job(10, SicMode::Genie);
    job.n_frames = 0;
    CHECK_THROWS_AS(run(job), ConfigError);
    job = reference_job(10, SicMode::Genie);
    job.alloc.beta.pop_back();
    CHECK_THROWS_AS(run(job), ConfigError);
    job = reference_job(10, SicMode::Genie);
    job.alloc.alpha[0] = -1.0;
    CHECK_THROWS_AS(run(job), ConfigError);
    CHECK_THROWS_AS(parse_sic_mode("oracle"), ConfigError);
}

TEST_CASE("a user without pilot power decodes at chance level")
{
    SimJob job = reference_job(4000, SicMode::Genie);
    job.alloc.alpha[2] = 0.0;
    const SimReport r = run(job);
    CHECK(r.degenerate_frames[2] == 4000);
    CHECK(r.mean_signal[2] == 0.0);
    CHECK(r.ber[2] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(r.degenerate_frames[0] == 0);
}

TEST_CASE("energy sweep: ordering, shape and infeasible points")
{
    const Scenario sc = drop12();
    SweepSpec spec;
    spec.energy_values = {1e-6, 10.0, 20.0};
    spec.schemes = {Scheme::Jpa, Scheme::Epa};
    spec.n_frames = 500;
    const auto rows = sweep_energy(sc.cfg, sc.profile, spec);
    REQUIRE(rows.size() == 2 * 3 * 4);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto& row = rows[i];
        CHECK(row.scheme == (i < 12 ? Scheme::Epa : Scheme::Jpa));
        CHECK(row.energy_budget == spec.energy_values[(i / 4) % 3]);
        CHECK(row.user == i % 4 + 1);
    }
    // EPA is always simulated; JPA at a vanishing budget is infeasible
    CHECK(rows[0].feasible);
    CHECK(rows[0].bits == 2ull * 96 * 500);
    for (std::size_t i = 12; i < 16; ++i)
    {
        CHECK_FALSE(rows[i].feasible);
        CHECK(rows[i].ber == 0.5);
        CHECK(rows[i].bits == 0);
    }
    CHECK(rows[20].feasible);

    spec.energy_values = {20.0, 10.0};
    CHECK_THROWS_AS(sweep_energy(sc.cfg, sc.profile, spec), ConfigError);
}
