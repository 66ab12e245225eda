#include <doctest.h>

#include <string>

#include "jpa/scenario_file.hpp"

using namespace jpa;

TEST_CASE("empty file keeps the reference defaults")
{
    const ScenarioSpec spec = parse_scenario("");
    const SystemConfig ref = reference_config();
    CHECK(spec.cfg.antennas == ref.antennas);
    CHECK(spec.cfg.weights == ref.weights);
    CHECK_FALSE(spec.nu_sq.has_value());
    CHECK(spec.drop_seed == 12);
}

TEST_CASE("full file with comments, lists and unit aliases")
{
    const std::string text = R"(# two-user example
M = 4
K = 2
T = 3      # longer pilot than needed
D = 20
noise_power_dbm = -90
E_max = 7.5
gamma_db = 3
weights = 0.5, 1
nu_sq = 1e-10 4e-10
symbol_duration = 1
)";
    const ScenarioSpec spec = parse_scenario(text);
    CHECK(spec.cfg.antennas == 4);
    CHECK(spec.cfg.users == 2);
    CHECK(spec.cfg.pilot_len == 3);
    CHECK(spec.cfg.data_len == 20);
    CHECK(spec.cfg.noise_power == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(spec.cfg.energy_budget == 7.5);
    CHECK(spec.cfg.gamma == doctest::Approx(db_to_linear(3.0)));
    CHECK(spec.cfg.weights == std::vector<double>{0.5, 1.0});
    REQUIRE(spec.nu_sq.has_value());

    const Scenario sc = resolve_scenario(spec);
    CHECK(sc.permuted);
    CHECK(sc.profile.nu_sq == std::vector<double>{4e-10, 1e-10});
}

TEST_CASE("rejections")
{
    CHECK_THROWS_AS(parse_scenario("frobnicate = 1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("M = 2\nM = 3"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("gamma = 2\ngamma_db = 3"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("noise_power = 1e-13\nnoise_power_dbm = -100"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("M 2"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("M = two"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("M = 0"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("M = -1"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("E_max = 1.0.0"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("E_max = inf"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("weights ="), ConfigError);
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.cfg"), ConfigError);
}

TEST_CASE("error messages carry the line number")
{
    try
    {
        parse_scenario("M = 2\n\nbogus = 1\n", "demo.cfg");
        FAIL("expected an error");
    }
    catch (const ConfigError& e)
    {
        CHECK(std::string(e.what()).find("demo.cfg:3") != std::string::npos);
    }
}

TEST_CASE("overrides apply after the file")
{
    ScenarioSpec spec = parse_scenario("gamma_db = 5\n");
    const auto [k, v] = split_override("gamma_db=50");
    CHECK(k == "gamma_db");
    CHECK(v == "50");
    apply_setting(spec, k, v);
    CHECK(spec.cfg.gamma == doctest::Approx(1e5));
    CHECK_THROWS_AS(split_override("novalue"), ConfigError);
    CHECK_THROWS_AS(split_override("=3"), ConfigError);
    CHECK_THROWS_AS(apply_setting(spec, "bogus", "1"), ConfigError);
}

TEST_CASE("geometry-drawn profiles are descending and seed-determined")
{
    ScenarioSpec spec;
    const Scenario a = resolve_scenario(spec);
    const Scenario b = resolve_scenario(spec);
    CHECK(a.profile.nu_sq == b.profile.nu_sq);
    CHECK(std::is_sorted(a.profile.nu_sq.rbegin(), a.profile.nu_sq.rend()));
    spec.drop_seed = 13;
    CHECK(resolve_scenario(spec).profile.nu_sq != a.profile.nu_sq);

    spec.geometry.min_distance = 500.0;
    CHECK_THROWS_AS(resolve_scenario(spec), ConfigError);
}

TEST_CASE("inconsistent K is reported at resolve time")
{
    const ScenarioSpec spec = parse_scenario("K = 3\n");
    CHECK_THROWS_AS(resolve_scenario(spec), ConfigError); // weights still has 4 entries
}
