// aww: command line front end for the harness.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "aww/config.hpp"
#include "aww/errors.hpp"
#include "aww/harness.hpp"
#include "aww/scenario.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

struct Common {
    std::string config_path;
    std::string scenario;
    std::string out_dir;
    std::vector<std::string> sets;
    std::size_t threads{0};
    bool override_smallness{false};
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value configuration file");
    cmd->add_option("--scenario", c.scenario, "builtin preset (ww-ref-2level, ww-const-2level)");
    cmd->add_option("--out", c.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--set", c.sets, "extra key=value entries applied after the file");
    cmd->add_option("--threads", c.threads, "worker threads for sweeps (default: hardware)");
    cmd->add_flag("--override-smallness", c.override_smallness, "run points that fail the coupling checks");
}

aww::Scenario build(const Common& c) {
    aww::Config cfg;
    if (!c.config_path.empty()) cfg = aww::Config::load(c.config_path);
    if (!c.scenario.empty()) cfg.set("scenario", c.scenario);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw aww::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!cfg.has("scenario") && !cfg.has("atom.name") && !cfg.has("atom.file")) {
        throw aww::ConfigError("no scenario given: use --config or --scenario");
    }
    aww::Scenario sc = aww::load_scenario(cfg);
    if (!c.out_dir.empty()) sc.out_dir = c.out_dir;
    sc.override_smallness = c.override_smallness;
    return sc;
}

std::size_t thread_count(const Common& c) {
    if (c.threads > 0) return c.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aww: weak-coupling atom/field simulations"};
    app.require_subcommand(1);

    Common sim_opts, sweep_opts, em_opts, reg_opts, val_opts;
    bool regimes_simulate = false;
    auto* sim = app.add_subcommand("simulate", "exact, Volterra, effective and leading-order runs at one point");
    add_common(sim, sim_opts);
    auto* sweep = app.add_subcommand("sweep", "error metrics over a parameter sweep with log-log slopes");
    add_common(sweep, sweep_opts);
    auto* em = app.add_subcommand("emission", "emitted field observable against its limits");
    add_common(em, em_opts);
    auto* reg = app.add_subcommand("regimes", "classify sweep points and predict decay");
    add_common(reg, reg_opts);
    reg->add_flag("--simulate", regimes_simulate, "also measure p_down with the exact solver");
    auto* val = app.add_subcommand("validate", "check smallness and well-coupledness");
    add_common(val, val_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (sim->parsed()) {
            aww::run_simulate(build(sim_opts), std::cout);
        } else if (sweep->parsed()) {
            const auto res = aww::run_sweep_command(build(sweep_opts), thread_count(sweep_opts), std::cout);
            if (res.partial) return exit_numerical;
        } else if (em->parsed()) {
            aww::run_emission(build(em_opts), std::cout);
        } else if (reg->parsed()) {
            aww::run_regimes(build(reg_opts), thread_count(reg_opts), regimes_simulate, std::cout);
        } else if (val->parsed()) {
            if (!aww::run_validate(build(val_opts), std::cout)) {
                std::cerr << "validation failed\n";
                return exit_config;
            }
        }
    } catch (const aww::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
