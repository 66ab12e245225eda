// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include "jpa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "jpa/scenario_file.hpp"
#include "jpa/verify.hpp"

namespace jpa::cli
{

namespace fs = std::filesystem;

std::vector<double> parse_energy_grid(const std::string& text)
{
    std::vector<double> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':'))
    {
        try
        {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        }
        catch (const std::exception&)
        {
            throw ConfigError(fmt::format("energy grid '{}': '{}' is not a number", text, item));
        }
    }
    if (parts.size() != 3)
        throw ConfigError(fmt::format("energy grid '{}' must be start:stop:step", text));
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(start > 0.0) || !(step > 0.0) || stop < start)
        throw ConfigError(fmt::format("energy grid '{}' needs 0 < start <= stop and step > 0", text));
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i)
    {
        const double e = start + static_cast<double>(i) * step;
        if (e > stop + 1e-9 * step)
            break;
        grid.push_back(e);
    }
    return grid;
}

std::vector<Scheme> parse_scheme_set(const std::string& text)
{
    if (text == "all")
        return {Scheme::Epa, Scheme::Jpa, Scheme::Ppa};
    try
    {
        return {parse_scheme(text)};
    }
    catch (const std::invalid_argument&)
    {
        throw ConfigError(fmt::format("unknown scheme '{}' (epa|ppa|jpa|all)", text));
    }
}

std::string format_number(double v)
{
    return fmt::format("{:.10g}", v);
}

std::string format_db(double linear)
{
    if (!(linear > 0.0))
        return "-inf";
    return fmt::format("{:.6f}", linear_to_db(linear));
}

std::string solutions_csv(const std::vector<Solution>& sols, const SystemConfig& cfg,
                          const LargeScaleProfile& profile, const std::vector<std::size_t>& permutation)
{
    std::string s =
        "schema_version,scheme,status,user,input_user,nu_sq,alpha,beta,energy,asinr_db,weighted_asinr,"
        "lambda_star,jfi,kkt_residual\n";
    for (const Solution& sol : sols)
    {
        std::vector<double> w;
        double jfi = 0.0;
        if (sol.feasible())
        {
            w = weighted_asinr(sol.asinr, cfg.weights);
            jfi = jain_index(w);
        }
        for (std::size_t k = 0; k < cfg.users; ++k)
        {
            const bool have = sol.feasible();
            s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", kSchemaVersion, to_string(sol.scheme),
                             to_string(sol.status), k + 1, permutation[k] + 1, format_number(profile[k]),
                             format_number(have ? sol.alloc.alpha[k] : 0.0),
                             format_number(have ? sol.alloc.beta[k] : 0.0),
                             format_number(have ? sol.alloc.energy(k, cfg) : 0.0),
                             format_db(have ? sol.asinr.asinr[k] : 0.0), format_number(have ? w[k] : 0.0),
                             format_number(have ? sol.lambda_star : 0.0), format_number(jfi),
                             fmt::format("{:.3e}", sol.kkt_residual));
        }
    }
    return s;
}

std::string link_csv(const std::vector<SweepRow>& rows)
{
    std::string s = "schema_version,scheme,e_max,user,status,feasible,alpha,beta,lambda_star,"
                    "asinr_analytic_db,asinr_empirical_db,ber,ber_stderr,errors,bits\n";
    for (const SweepRow& r : rows)
        s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", kSchemaVersion, to_string(r.scheme),
                         format_number(r.energy_budget), r.user, to_string(r.status), r.feasible ? "true" : "false",
                         format_number(r.alpha), format_number(r.beta), format_number(r.lambda_star),
                         format_db(r.analytic_asinr), format_db(r.empirical_asinr), format_number(r.ber),
                         format_number(r.ber_stderr), r.errors, r.bits);
    return s;
}

namespace
{

struct Context
{
    RunManifest manifest;
    Scenario scenario;
    std::optional<kernels::Isa> isa;
    fs::path out_dir;
};

void write_file(const fs::path& path, const std::string& body)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    f << body;
    if (!f)
        throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

nlohmann::json scenario_json(const Scenario& sc)
{
    const SystemConfig& c = sc.cfg;
    nlohmann::json j;
    j["M"] = c.antennas;
    j["K"] = c.users;
    j["T"] = c.pilot_len;
    j["D"] = c.data_len;
    j["noise_power"] = c.noise_power;
    j["E_max"] = c.energy_budget;
    j["gamma"] = c.gamma;
    j["weights"] = c.weights;
    j["symbol_duration"] = c.symbol_duration;
    j["nu_sq"] = sc.profile.nu_sq;
    std::vector<std::size_t> perm1;
    for (std::size_t p : sc.permutation)
        perm1.push_back(p + 1);
    j["input_user_of_position"] = perm1;
    return j;
}

void write_manifest(const Context& ctx)
{
    const RunManifest& m = ctx.manifest;
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = m.command;
    j["scenario_path"] = m.scenario_path;
    j["seed"] = m.seed;
    j["overrides"] = m.overrides;
    j["scheme"] = m.scheme;
    j["frames"] = m.frames;
    j["e_grid"] = m.e_grid;
    j["sic_mode"] = m.sic_mode;
    j["scenario"] = scenario_json(ctx.scenario);
    write_file(ctx.out_dir / "manifest.json", j.dump(2) + "\n");
}

Context prepare(const RunManifest& m)
{
    Context ctx;
    ctx.manifest = m;
    ScenarioSpec spec = m.scenario_path.empty() ? ScenarioSpec{} : load_scenario_file(m.scenario_path);
    for (const std::string& o : m.overrides)
    {
        const auto [k, v] = split_override(o);
        apply_setting(spec, k, v);
    }
    ctx.scenario = resolve_scenario(spec);

    if (m.kernels == "scalar")
        ctx.isa = kernels::Isa::Scalar;
    else if (m.kernels == "avx2")
    {
        if (!kernels::cpu_has_avx2())
            throw ConfigError("--kernels avx2 requested but the CPU lacks AVX2");
        ctx.isa = kernels::Isa::Avx2;
    }
    else if (m.kernels != "auto")
        throw ConfigError(fmt::format("unknown kernel set '{}' (auto|scalar|avx2)", m.kernels));

    ctx.out_dir = m.out_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec || !fs::is_directory(ctx.out_dir))
        throw ConfigError(fmt::format("output directory '{}' is not usable: {}", m.out_dir, ec.message()));
    return ctx;
}

SicMode sic_mode_of(const std::string& s)
{
    try
    {
        return parse_sic_mode(s);
    }
    catch (const std::invalid_argument&)
    {
        throw ConfigError(fmt::format("unknown SIC mode '{}' (genie|detected)", s));
    }
}

void print_scenario(std::ostream& out, const Scenario& sc)
{
    const SystemConfig& c = sc.cfg;
    fmt::print(out, "scenario: M={} K={} T={} D={} sigma^2={:.4g} W E_max={:.4g} J gamma={:.3f} dB\n", c.antennas,
               c.users, c.pilot_len, c.data_len, c.noise_power, c.energy_budget, linear_to_db(c.gamma));
    if (sc.permuted)
        fmt::print(out, "note: users re-ordered by descending nu^2 for SIC\n");
}

int cmd_optimize(const Context& ctx, std::ostream& out)
{
    const Scenario& sc = ctx.scenario;
    std::vector<Solution> sols;
    bool any_infeasible = false;
    nlohmann::json records = nlohmann::json::array();
    for (Scheme s : parse_scheme_set(ctx.manifest.scheme))
    {
        Solution sol = solve_scheme(s, sc.cfg, sc.profile);
        any_infeasible |= !sol.feasible();

        nlohmann::json r;
        r["scheme"] = to_string(s);
        r["status"] = to_string(sol.status);
        r["feasible"] = sol.feasible();
        r["kkt_residual"] = sol.kkt_residual;
        r["iterations"] = sol.iterations;
        if (sol.feasible())
        {
            const std::vector<double> w = weighted_asinr(sol.asinr, sc.cfg.weights);
            r["lambda_star"] = sol.lambda_star;
            r["alpha"] = sol.alloc.alpha;
            r["beta"] = sol.alloc.beta;
            r["asinr"] = sol.asinr.asinr;
            r["jfi"] = jain_index(w);
            fmt::print(out, "{:<4} {:<10} lambda*={:.6g} min ASINR={} dB JFI={:.4f}\n", to_string(s),
                       to_string(sol.status), sol.lambda_star,
                       format_db(*std::min_element(sol.asinr.asinr.begin(), sol.asinr.asinr.end())), jain_index(w));
        }
        else
        {
            r["phase1_slack"] = sol.phase1_slack;
            fmt::print(out, "{:<4} {:<10} (phase-I slack {:.3g})\n", to_string(s), to_string(sol.status),
                       sol.phase1_slack);
        }
        records.push_back(std::move(r));
        sols.push_back(std::move(sol));
    }

    write_file(ctx.out_dir / "solutions.csv", solutions_csv(sols, sc.cfg, sc.profile, sc.permutation));
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["scenario"] = scenario_json(sc);
    doc["solutions"] = std::move(records);
    write_file(ctx.out_dir / "solutions.json", doc.dump(2) + "\n");
    write_manifest(ctx);
    return any_infeasible ? kExitInfeasible : kExitOk;
}

SweepSpec sweep_spec(const Context& ctx, std::vector<double> energies, std::size_t default_frames)
{
    SweepSpec spec;
    spec.energy_values = std::move(energies);
    spec.schemes = parse_scheme_set(ctx.manifest.scheme);
    spec.n_frames = ctx.manifest.frames ? ctx.manifest.frames : default_frames;
    spec.sic_mode = sic_mode_of(ctx.manifest.sic_mode);
    spec.seed = ctx.manifest.seed;
    spec.workers = ctx.manifest.threads;
    spec.isa = ctx.isa;
    return spec;
}

bool any_infeasible(const std::vector<SweepRow>& rows)
{
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.feasible; });
}

int cmd_simulate(const Context& ctx, std::ostream& out)
{
    const Scenario& sc = ctx.scenario;
    const SweepSpec spec = sweep_spec(ctx, {sc.cfg.energy_budget}, 100000);
    const std::vector<SweepRow> rows = sweep_energy(sc.cfg, sc.profile, spec);

    fmt::print(out, "{:<4} {:>4} {:>12} {:>12} {:>9} {:>12}\n", "", "user", "analytic_db", "empirical_db", "delta_db",
               "ber");
    for (const SweepRow& r : rows)
    {
        if (!r.feasible)
        {
            fmt::print(out, "{:<4} {:>4} {:>12} {:>12} {:>9} {:>12}\n", to_string(r.scheme), r.user, "infeasible",
                       "-", "-", format_number(r.ber));
            continue;
        }
        const double delta = linear_to_db(r.empirical_asinr) - linear_to_db(r.analytic_asinr);
        fmt::print(out, "{:<4} {:>4} {:>12.4f} {:>12.4f} {:>+9.4f} {:>12.4e}\n", to_string(r.scheme), r.user,
                   linear_to_db(r.analytic_asinr), linear_to_db(r.empirical_asinr), delta, r.ber);
    }
    write_file(ctx.out_dir / "simulate.csv", link_csv(rows));
    write_manifest(ctx);
    return any_infeasible(rows) ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const Context& ctx, std::ostream& out)
{
    const Scenario& sc = ctx.scenario;
    const SweepSpec spec = sweep_spec(ctx, parse_energy_grid(ctx.manifest.e_grid), 10000);
    const std::vector<SweepRow> rows = sweep_energy(sc.cfg, sc.profile, spec);
    std::size_t infeasible_points = 0;
    for (const SweepRow& r : rows)
        infeasible_points += (!r.feasible && r.user == 1);
    fmt::print(out, "{} rows ({} energies x {} schemes x {} users), {} infeasible points\n", rows.size(),
               spec.energy_values.size(), spec.schemes.size(), sc.cfg.users, infeasible_points);
    write_file(ctx.out_dir / "sweep.csv", link_csv(rows));
    write_manifest(ctx);
    return infeasible_points ? kExitInfeasible : kExitOk;
}

std::string csv_quote(const std::string& s)
{
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

int cmd_verify(const Context& ctx, std::ostream& out)
{
    VerifyOptions opts;
    opts.scenario = ctx.scenario;
    opts.seed = ctx.manifest.seed;
    opts.frames = ctx.manifest.frames ? ctx.manifest.frames : 100000;
    opts.workers = ctx.manifest.threads;
    opts.isa = ctx.isa;
    opts.inject_fault = ctx.manifest.inject_fault;
    if (opts.inject_fault)
        fmt::print(out, "fault injection active: closed-form signal term scaled by 1.05\n");

    const std::vector<CheckResult> checks = run_verify(opts);
    bool all = true;
    std::string csv = "schema_version,check,passed,detail\n";
    for (const CheckResult& c : checks)
    {
        all &= c.passed;
        fmt::print(out, "{:<28} {:<4} {}\n", c.name, c.passed ? "PASS" : "FAIL", c.detail);
        csv += fmt::format("{},{},{},{}\n", kSchemaVersion, c.name, c.passed ? "true" : "false", csv_quote(c.detail));
    }
    write_file(ctx.out_dir / "verify.csv", csv);
    write_manifest(ctx);
    fmt::print(out, "{}\n", all ? "all checks passed" : "verification FAILED");
    return all ? kExitOk : kExitVerify;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Joint pilot and payload power allocation for uplink MIMO-NOMA"};
    app.require_subcommand(1);
    RunManifest m;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", m.scenario_path, "scenario file (flat key = value); default: reference scenario");
        sub->add_option("--out", m.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", m.seed, "master RNG seed")->capture_default_str();
        sub->add_option("--set", m.overrides, "override a scenario key (key=value), repeatable")
            ->allow_extra_args(false);
        sub->add_option("--threads", m.threads, "worker threads, 0 = all cores")->capture_default_str();
        sub->add_option("--kernels", m.kernels, "auto|scalar|avx2")->capture_default_str();
    };
    const auto add_scheme = [&](CLI::App* sub) {
        sub->add_option("--scheme", m.scheme, "epa|ppa|jpa|all")->capture_default_str();
    };
    const auto add_sim = [&](CLI::App* sub, const char* frames_help) {
        sub->add_option("--frames", m.frames, frames_help);
        sub->add_option("--sic-mode", m.sic_mode, "genie|detected")->capture_default_str();
    };

    CLI::App* opt = app.add_subcommand("optimize", "solve the allocation for each scheme");
    add_common(opt);
    add_scheme(opt);
    CLI::App* sim = app.add_subcommand("simulate", "solve, then run the link simulation");
    add_common(sim);
    add_scheme(sim);
    add_sim(sim, "frames per scheme (default 100000)");
    CLI::App* swp = app.add_subcommand("sweep", "BER versus energy budget");
    add_common(swp);
    add_scheme(swp);
    add_sim(swp, "frames per point (default 10000)");
    swp->add_option("--e-grid", m.e_grid, "energy grid start:stop:step [J]")->capture_default_str();
    CLI::App* ver = app.add_subcommand("verify", "run the oracle suite");
    add_common(ver);
    ver->add_option("--frames", m.frames, "frames for the Monte Carlo checks (default 100000)");
    ver->add_flag("--inject-fault", m.inject_fault, "perturb the closed-form signal term to test the harness");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try
    {
        if (m.frames == 0 && (sim->parsed() || swp->parsed() || ver->parsed()) &&
            (sim->count("--frames") || swp->count("--frames") || ver->count("--frames")))
            throw ConfigError("--frames must be >= 1");
        m.command = app.get_subcommands().front()->get_name();
        const Context ctx = prepare(m);
        print_scenario(out, ctx.scenario);
        if (opt->parsed())
            return cmd_optimize(ctx, out);
        if (sim->parsed())
            return cmd_simulate(ctx, out);
        if (swp->parsed())
            return cmd_sweep(ctx, out);
        return cmd_verify(ctx, out);
    }
    catch (const ConfigError& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return kExitConfig;
    }
    catch (const std::exception& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return kExitConfig;
    }
}

} // namespace jpa::cli
