// Command-line front end: scenario solves, Monte Carlo simulation, alpha
// search and figure-reproduction experiments.
//
// Exit codes: 0 success, 2 configuration error, 3 solver convergence failure,
// 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nomafair/baselines.hpp"
#include "nomafair/errors.hpp"
#include "nomafair/experiment.hpp"
#include "nomafair/fairness.hpp"
#include "nomafair/model.hpp"
#include "nomafair/perfect.hpp"
#include "nomafair/rng.hpp"
#include "nomafair/statistical.hpp"

namespace {

using nomafair::ConfigError;

struct Options {
    int k = 6;
    double snr_db = 20.0;
    double r0 = 0.9;
    double alpha = 1.0;
    double fir = 1.0;
    long blocks = 10000;
    uint64_t seed = 42;
    double eps1 = 1e-5;
    double eps2 = 1e-6;
    std::string config;
    std::string out;
    std::string format = "csv";
    std::string preset;
    std::string scheme = "noma-opt";
    std::string solver = "ao";
    std::string regime = "stat";
};

void add_common_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--k", o.k, "number of users");
    cmd->add_option("--snr-db", o.snr_db, "transmit SNR in dB");
    cmd->add_option("--r0", o.r0, "target rate in BPCU (statistical regime)");
    cmd->add_option("--alpha", o.alpha, "fairness parameter");
    cmd->add_option("--fir", o.fir, "fairness index requirement");
    cmd->add_option("--blocks", o.blocks, "Monte Carlo fading blocks");
    cmd->add_option("--seed", o.seed, "base RNG seed");
    cmd->add_option("--eps1", o.eps1, "inner bisection tolerance");
    cmd->add_option("--eps2", o.eps2, "outer KKT residual tolerance");
    cmd->add_option("--config", o.config, "flat key-value config file (JSON)");
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json-lines")
        ->check(CLI::IsMember({"csv", "json-lines"}));
    cmd->add_option("--preset", o.preset, "figure preset fig1..fig7");
    cmd->add_option("--scheme", o.scheme, "scheme")
        ->check(CLI::IsMember({"noma-opt", "noma-fixed", "tdma-opt"}));
    cmd->add_option("--solver", o.solver, "perfect-regime solver")
        ->check(CLI::IsMember({"ao", "baseline"}));
    cmd->add_option("--regime", o.regime, "stat or perfect (search-alpha)")
        ->check(CLI::IsMember({"stat", "perfect"}));
}

// File values fill in only the keys whose flags were not given on the command
// line; flags > file > defaults. Unknown keys are a hard error.
void apply_config_file(CLI::App* cmd, Options& o) {
    if (o.config.empty()) return;
    std::ifstream f(o.config);
    if (!f) throw std::runtime_error("cannot open config file " + o.config);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config file: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config file must hold a flat key-value object");

    auto given = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw("--" + flag);
        return opt != nullptr && opt->count() > 0;
    };
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "k") { if (!given("k")) o.k = value.get<int>(); }
            else if (key == "snr_db") { if (!given("snr-db")) o.snr_db = value.get<double>(); }
            else if (key == "r0") { if (!given("r0")) o.r0 = value.get<double>(); }
            else if (key == "alpha") { if (!given("alpha")) o.alpha = value.get<double>(); }
            else if (key == "fir") { if (!given("fir")) o.fir = value.get<double>(); }
            else if (key == "blocks") { if (!given("blocks")) o.blocks = value.get<long>(); }
            else if (key == "seed") { if (!given("seed")) o.seed = value.get<uint64_t>(); }
            else if (key == "eps1") { if (!given("eps1")) o.eps1 = value.get<double>(); }
            else if (key == "eps2") { if (!given("eps2")) o.eps2 = value.get<double>(); }
            else if (key == "out") { if (!given("out")) o.out = value.get<std::string>(); }
            else if (key == "format") { if (!given("format")) o.format = value.get<std::string>(); }
            else if (key == "preset") { if (!given("preset")) o.preset = value.get<std::string>(); }
            else if (key == "scheme") { if (!given("scheme")) o.scheme = value.get<std::string>(); }
            else if (key == "solver") { if (!given("solver")) o.solver = value.get<std::string>(); }
            else if (key == "regime") { if (!given("regime")) o.regime = value.get<std::string>(); }
            else throw ConfigError("unknown config key: " + key);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
}

nomafair::SystemConfig make_config(const Options& o) {
    return nomafair::SystemConfig::with_default_distances(
        o.k, nomafair::snr_db_to_linear(o.snr_db), 2.0, o.r0, o.alpha, o.eps1, o.eps2);
}

void write_output(const std::string& body, const std::string& out) {
    if (out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file " + out);
    f << body;
    if (!f.good()) throw std::runtime_error("write failed for " + out);
}

nlohmann::ordered_json report_json(const nomafair::SolveReport& rep) {
    nlohmann::ordered_json j;
    if (rep.allocation) {
        const char* kind = rep.allocation->kind == nomafair::PowerKind::Physical
                               ? "physical"
                               : rep.allocation->kind == nomafair::PowerKind::Equivalent
                                     ? "equivalent"
                                     : "normalized";
        j["powers"] = rep.allocation->values;
        j["powers_kind"] = kind;
    }
    if (rep.cumulative) j["cumulative"] = rep.cumulative->b;
    j["per_user"] = rep.per_user;
    j["metric_units"] = rep.units == nomafair::MetricUnits::Bpcu ? "bpcu" : "npcu";
    j["objective"] = rep.objective;
    j["sum_metric"] = rep.sum_metric();
    j["jain"] = rep.jain;
    j["residual"] = rep.residual;
    j["iterations"] = rep.iterations;
    return j;
}

int cmd_solve_stat(const Options& o) {
    const nomafair::SystemConfig cfg = make_config(o);
    nomafair::SolveReport rep;
    if (o.scheme == "noma-opt")
        rep = nomafair::solve_statistical(cfg);
    else if (o.scheme == "noma-fixed")
        rep = nomafair::fixed_noma_statistical_report(cfg);
    else
        rep = nomafair::tdma_statistical_solve(cfg);
    write_output(report_json(rep).dump(2) + "\n", o.out);
    return 0;
}

int cmd_solve_perfect(const Options& o) {
    const nomafair::SystemConfig cfg = make_config(o);
    const nomafair::ChannelRealization H =
        nomafair::sample_channels(cfg, nomafair::derive_seed(o.seed, 0));
    nomafair::SolveReport rep;
    if (o.scheme == "noma-opt")
        rep = nomafair::solve_perfect(H, cfg, o.solver == "baseline");
    else if (o.scheme == "noma-fixed")
        rep = nomafair::fixed_noma_perfect_report(H, cfg);
    else
        rep = nomafair::tdma_perfect_solve(H, cfg);
    nlohmann::ordered_json j = report_json(rep);
    j["gains"] = H.H;
    write_output(j.dump(2) + "\n", o.out);
    return 0;
}

int cmd_simulate(CLI::App* cmd, const Options& o) {
    nomafair::ExperimentSpec spec;
    spec.regime = nomafair::Regime::Perfect;
    spec.sweep_axis = "snr_db";
    spec.sweep_values = {o.snr_db};
    nomafair::SchemeVariant variant;
    variant.base = o.scheme;
    if (cmd->get_option("--fir")->count() > 0) variant.fir = o.fir;
    spec.schemes = {variant};
    spec.K = o.k;
    spec.r0 = o.r0;
    spec.alpha = o.alpha;
    spec.eps1 = o.eps1;
    spec.eps2 = o.eps2;
    spec.blocks = o.blocks;
    spec.seed = o.seed;
    const auto rows = nomafair::run_experiment(spec);
    if (o.out.empty())
        std::cout << nomafair::render_rows(rows, o.format);
    else
        nomafair::emit(rows, o.out, o.format);
    return 0;
}

int cmd_search_alpha(const Options& o) {
    const nomafair::SystemConfig cfg = make_config(o);
    nomafair::AlphaSearchSpec spec;
    spec.fir = o.fir;
    spec.scheme = o.scheme == "tdma-opt" ? nomafair::Scheme::Tdma : nomafair::Scheme::Noma;
    spec.regime = o.regime == "perfect" ? nomafair::Regime::Perfect
                                        : nomafair::Regime::Statistical;
    spec.strategy = (spec.scheme == nomafair::Scheme::Tdma &&
                     spec.regime == nomafair::Regime::Statistical)
                        ? nomafair::SearchStrategy::Grid
                        : nomafair::SearchStrategy::Bisection;
    spec.pilot_seed = o.seed;
    const nomafair::AlphaSearchResult res = nomafair::search_alpha(spec, cfg);
    nlohmann::ordered_json j;
    j["alpha"] = res.alpha;
    j["fairness"] = res.fairness;
    j["report"] = report_json(res.report);
    write_output(j.dump(2) + "\n", o.out);
    return 0;
}

int cmd_experiment(CLI::App* cmd, const Options& o) {
    if (o.preset.empty())
        throw ConfigError("experiment requires --preset (fig1..fig7)");
    nomafair::ExperimentSpec spec = nomafair::preset_spec(o.preset);
    if (cmd->get_option("--blocks")->count() > 0) spec.blocks = o.blocks;
    if (cmd->get_option("--seed")->count() > 0) spec.seed = o.seed;
    if (cmd->get_option("--snr-db")->count() > 0) spec.snr_db = o.snr_db;
    if (cmd->get_option("--r0")->count() > 0) spec.r0 = o.r0;
    spec.eps1 = o.eps1;
    spec.eps2 = o.eps2;
    const auto rows = nomafair::run_experiment(spec);
    if (o.out.empty())
        std::cout << nomafair::render_rows(rows, o.format);
    else
        nomafair::emit(rows, o.out, o.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-fair NOMA power allocation"};
    app.require_subcommand(1);

    Options o;
    CLI::App* solve_stat = app.add_subcommand("solve-stat", "statistical-CSIT solve");
    CLI::App* solve_perfect =
        app.add_subcommand("solve-perfect", "perfect-CSIT solve for one fading block");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo simulation over fading blocks");
    CLI::App* search =
        app.add_subcommand("search-alpha", "smallest alpha meeting a fairness target");
    CLI::App* experiment =
        app.add_subcommand("experiment", "figure-reproduction experiment presets");
    for (CLI::App* cmd : {solve_stat, solve_perfect, simulate, search, experiment})
        add_common_flags(cmd, o);

    try {
        app.parse(argc, argv);
        CLI::App* cmd = app.get_subcommands().front();
        apply_config_file(cmd, o);
        if (cmd == solve_stat) return cmd_solve_stat(o);
        if (cmd == solve_perfect) return cmd_solve_perfect(o);
        if (cmd == simulate) return cmd_simulate(cmd, o);
        if (cmd == search) return cmd_search_alpha(o);
        return cmd_experiment(cmd, o);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nomafair::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const nomafair::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
