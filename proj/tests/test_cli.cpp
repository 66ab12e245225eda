#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "jpa/cli.hpp"

namespace fs = std::filesystem;
using namespace jpa;
using namespace jpa::cli;

namespace
{

struct Outcome
{
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "jpa");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("jpa_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header)
{
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i)
        idx[header[i]] = i;
    return idx;
}

} // namespace

TEST_CASE("energy grid and scheme parsing")
{
    CHECK(parse_energy_grid("5:30:5") == std::vector<double>{5, 10, 15, 20, 25, 30});
    CHECK(parse_energy_grid("1:2:0.3").size() == 4);
    CHECK(parse_energy_grid("0.1:0.3:0.1").size() == 3);
    CHECK_THROWS_AS(parse_energy_grid("5:30"), ConfigError);
    CHECK_THROWS_AS(parse_energy_grid("30:5:5"), ConfigError);
    CHECK_THROWS_AS(parse_energy_grid("5:30:0"), ConfigError);
    CHECK_THROWS_AS(parse_energy_grid("0:30:5"), ConfigError);
    CHECK_THROWS_AS(parse_energy_grid("a:b:c"), ConfigError);
    CHECK(parse_scheme_set("all") == std::vector<Scheme>{Scheme::Epa, Scheme::Jpa, Scheme::Ppa});
    CHECK(parse_scheme_set("ppa") == std::vector<Scheme>{Scheme::Ppa});
    CHECK_THROWS_AS(parse_scheme_set("best"), ConfigError);
    CHECK(format_db(0.0) == "-inf");
    CHECK(format_db(10.0) == "10.000000");
}

TEST_CASE("exit codes")
{
    const std::string out = scratch_dir("codes").string();
    CHECK(invoke({"optimize", "--scenario", "/nonexistent.cfg", "--out", out}).code == kExitConfig);
    CHECK(invoke({"optimize", "--set", "bogus=1", "--out", out}).code == kExitConfig);
    CHECK(invoke({"optimize", "--set", "gamma_db", "--out", out}).code == kExitConfig);
    CHECK(invoke({"optimize", "--scheme", "opa", "--out", out}).code == kExitConfig);
    CHECK(invoke({"simulate", "--frames", "0", "--out", out}).code == kExitConfig);
    CHECK(invoke({"simulate", "--sic-mode", "psychic", "--frames", "10", "--out", out}).code == kExitConfig);
    CHECK(invoke({"sweep", "--e-grid", "5:1:1", "--out", out}).code == kExitConfig);
    CHECK(invoke({"frobnicate"}).code == kExitConfig);
    CHECK(invoke({}).code == kExitConfig);
    CHECK(invoke({"--help"}).code == kExitOk);

    const Outcome inf = invoke({"optimize", "--set", "gamma_db=50", "--out", out});
    CHECK(inf.code == kExitInfeasible);
    CHECK(fs::exists(fs::path(out) / "solutions.csv"));
    CHECK(invoke({"optimize", "--out", out}).code == kExitOk);
}

TEST_CASE("verify command and its fault injection")
{
    const std::string out = scratch_dir("verify").string();
    const Outcome ok = invoke({"verify", "--frames", "20000", "--out", out});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("all checks passed") != std::string::npos);
    CHECK(fs::exists(fs::path(out) / "verify.csv"));
    CHECK(fs::exists(fs::path(out) / "manifest.json"));

    const Outcome bad = invoke({"verify", "--frames", "20000", "--inject-fault", "--out", out});
    CHECK(bad.code == kExitVerify);
}

TEST_CASE("simulate output is byte-identical across runs and thread counts")
{
    const fs::path a = scratch_dir("sim_a"), b = scratch_dir("sim_b"), c = scratch_dir("sim_c");
    const std::vector<std::string> base{"simulate", "--frames", "3000", "--seed", "5"};
    auto with = [&](const fs::path& dir, const std::string& threads) {
        auto args = base;
        args.insert(args.end(), {"--out", dir.string(), "--threads", threads});
        return invoke(args).code;
    };
    REQUIRE(with(a, "1") == kExitOk);
    REQUIRE(with(b, "1") == kExitOk);
    REQUIRE(with(c, "4") == kExitOk);
    const std::string sa = slurp(a / "simulate.csv");
    CHECK_FALSE(sa.empty());
    CHECK(sa == slurp(b / "simulate.csv"));
    CHECK(sa == slurp(c / "simulate.csv"));
    CHECK(sa.find('\r') == std::string::npos);
    CHECK(sa.back() == '\n');

    auto args = base;
    args.insert(args.end(), {"--out", c.string(), "--kernels", "scalar"});
    REQUIRE(invoke(args).code == kExitOk);
    CHECK(sa == slurp(c / "simulate.csv"));
}

TEST_CASE("optimize output schema and scheme relations")
{
    const fs::path dir = scratch_dir("opt");
    REQUIRE(invoke({"optimize", "--out", dir.string()}).code == kExitOk);
    const auto rows = csv_rows(slurp(dir / "solutions.csv"));
    REQUIRE(rows.size() == 1 + 3 * 4);
    const auto col = header_index(rows[0]);
    REQUIRE(col.count("schema_version"));
    REQUIRE(col.count("asinr_db"));
    CHECK(fs::exists(dir / "solutions.json"));

    std::map<std::string, double> lambda;
    std::map<std::string, std::vector<double>> weighted;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const auto& r = rows[i];
        CHECK(r[col.at("schema_version")] == std::to_string(kSchemaVersion));
        const std::string scheme = r[col.at("scheme")];
        CHECK(r[col.at("user")] == std::to_string((i - 1) % 4 + 1));
        lambda[scheme] = std::stod(r[col.at("lambda_star")]);
        weighted[scheme].push_back(std::stod(r[col.at("weighted_asinr")]));
    }
    CHECK(rows[1][col.at("scheme")] == "epa");
    CHECK(rows[5][col.at("scheme")] == "jpa");
    CHECK(rows[9][col.at("scheme")] == "ppa");
    CHECK(lambda["jpa"] >= lambda["ppa"] * (1.0 - 1e-9));

    auto argmin = [](const std::vector<double>& v) { return std::min_element(v.begin(), v.end()) - v.begin(); };
    // EPA leaves a different user at the bottom than the optimiser does
    CHECK(argmin(weighted["epa"]) != argmin(weighted["jpa"]));
}

TEST_CASE("sweep rows follow scheme, budget, user order")
{
    const fs::path dir = scratch_dir("sweep");
    const Outcome o = invoke({"sweep", "--e-grid", "0.001:20.001:10", "--frames", "300", "--scheme", "all",
                              "--out", dir.string()});
    CHECK(o.code == kExitInfeasible); // the 1 mJ budget is infeasible for PPA and JPA
    const auto rows = csv_rows(slurp(dir / "sweep.csv"));
    REQUIRE(rows.size() == 1 + 3 * 3 * 4);
    const auto col = header_index(rows[0]);
    const std::vector<std::string> order{"epa", "jpa", "ppa"};
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const auto& r = rows[i];
        const std::size_t j = i - 1;
        CHECK(r[col.at("scheme")] == order[j / 12]);
        CHECK(r[col.at("user")] == std::to_string(j % 4 + 1));
        if (r[col.at("feasible")] == "false")
        {
            CHECK(r[col.at("ber")] == "0.5");
            CHECK(r[col.at("status")] == "infeasible");
        }
    }
    CHECK(rows[13][col.at("feasible")] == "false"); // jpa at 1 mJ
    CHECK(rows[1][col.at("feasible")] == "true");   // epa is always feasible
    CHECK(std::stod(rows[13][col.at("e_max")]) == doctest::Approx(0.001));
}

TEST_CASE("manifest records the invocation")
{
    const fs::path dir = scratch_dir("manifest");
    REQUIRE(invoke({"optimize", "--seed", "42", "--set", "E_max=25", "--out", dir.string()}).code == kExitOk);
    const std::string m = slurp(dir / "manifest.json");
    CHECK(m.find("\"seed\": 42") != std::string::npos);
    CHECK(m.find("E_max=25") != std::string::npos);
    CHECK(m.find("optimize") != std::string::npos);
}
