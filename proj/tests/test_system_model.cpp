#include <doctest.h>

#include <string>

#include "jpa/optimizer.hpp"
#include "jpa/system_model.hpp"

using namespace jpa;

TEST_CASE("reference constants validate unchanged")
{
    const SystemConfig cfg = reference_config();
    CHECK(cfg.antennas == 2);
    CHECK(cfg.users == 4);
    CHECK(cfg.pilot_len == 4);
    CHECK(cfg.data_len == 96);
    CHECK(cfg.noise_power == doctest::Approx(1e-13).epsilon(1e-12));
    CHECK(linear_to_db(cfg.gamma) == doctest::Approx(5.0).epsilon(1e-12));

    const LargeScaleProfile p{{4e-11, 3e-11, 2e-11, 1e-11}};
    const Scenario sc = validate_config(cfg, p);
    CHECK_FALSE(sc.permuted);
    CHECK(sc.profile.nu_sq == p.nu_sq);
    CHECK(sc.permutation == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("T < K is rejected")
{
    SystemConfig cfg = reference_config();
    cfg.pilot_len = 3;
    try
    {
        validate_config(cfg, LargeScaleProfile{{4, 3, 2, 1}});
        FAIL("expected an error");
    }
    catch (const ConfigError& e)
    {
        CHECK(std::string(e.what()).find("T < K") != std::string::npos);
    }
}

TEST_CASE("unsorted profile is sorted with a recorded permutation")
{
    SystemConfig cfg = reference_config();
    cfg.users = 2;
    cfg.weights = {1.0, 1.0};
    const Scenario sc = validate_config(cfg, LargeScaleProfile{{1.0, 2.0}});
    CHECK(sc.permuted);
    CHECK(sc.profile.nu_sq == std::vector<double>{2.0, 1.0});
    CHECK(sc.permutation == std::vector<std::size_t>{1, 0});

    // idempotent: a second pass is the identity
    const Scenario again = validate_config(sc.cfg, sc.profile);
    CHECK_FALSE(again.permuted);
    CHECK(again.profile.nu_sq == sc.profile.nu_sq);
    CHECK(again.permutation == std::vector<std::size_t>{0, 1});
}

TEST_CASE("equal gains keep their input order")
{
    SystemConfig cfg = reference_config();
    const Scenario sc = validate_config(cfg, LargeScaleProfile{{1.0, 3.0, 1.0, 3.0}});
    CHECK(sc.permutation == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("dimension and sign errors")
{
    const LargeScaleProfile p{{4, 3, 2, 1}};
    SUBCASE("weights length")
    {
        SystemConfig cfg = reference_config();
        cfg.weights = {1, 1, 1};
        CHECK_THROWS_AS(validate_config(cfg, p), ConfigError);
    }
    SUBCASE("profile length")
    {
        CHECK_THROWS_AS(validate_config(reference_config(), LargeScaleProfile{{2, 1}}), ConfigError);
    }
    SUBCASE("decreasing weights")
    {
        SystemConfig cfg = reference_config();
        cfg.weights = {0.5, 0.25, 0.125, 0.125};
        CHECK_THROWS_AS(validate_config(cfg, p), ConfigError);
    }
    SUBCASE("non-positive constants")
    {
        for (int which = 0; which < 5; ++which)
        {
            SystemConfig cfg = reference_config();
            switch (which)
            {
            case 0: cfg.noise_power = 0.0; break;
            case 1: cfg.energy_budget = -1.0; break;
            case 2: cfg.gamma = 0.0; break;
            case 3: cfg.symbol_duration = 0.0; break;
            case 4: cfg.weights[0] = 0.0; break;
            }
            CHECK_THROWS_AS(validate_config(cfg, p), ConfigError);
        }
    }
    SUBCASE("zero counts")
    {
        SystemConfig cfg = reference_config();
        cfg.antennas = 0;
        CHECK_THROWS_AS(validate_config(cfg, p), ConfigError);
        cfg = reference_config();
        cfg.data_len = 0;
        CHECK_THROWS_AS(validate_config(cfg, p), ConfigError);
    }
    SUBCASE("non-positive gain")
    {
        CHECK_THROWS_AS(validate_config(reference_config(), LargeScaleProfile{{4, 3, 2, 0}}), ConfigError);
    }
}

TEST_CASE("unit helpers")
{
    CHECK(dbm_to_watts(-100.0) == doctest::Approx(1e-13).epsilon(1e-12));
    CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("energy accounting and budget check")
{
    const SystemConfig cfg = reference_config();
    const PowerAllocation epa = epa_allocation(cfg);
    CHECK(epa.alpha[0] == doctest::Approx(0.2));
    CHECK(epa.beta[3] == doctest::Approx(0.2));
    CHECK(epa.energy(0, cfg) == doctest::Approx(20.0));
    CHECK(epa.within_budget(cfg));

    PowerAllocation over = epa;
    over.beta[2] *= 1.0 + 1e-6;
    CHECK_FALSE(over.within_budget(cfg));
    PowerAllocation tiny_over = epa;
    tiny_over.beta[2] *= 1.0 + 1e-12;
    CHECK(tiny_over.within_budget(cfg));
}
