// Command-line front end for the log-KdV periodic-wave toolkit.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "logkdv/commands.hpp"
#include "logkdv/config.hpp"

namespace {

int run(const std::string& name, const std::string& config_path, const std::string& out_path,
        int grid, int parallel, const std::vector<std::string>& tol_overrides,
        const std::vector<std::string>& kv_args) {
    using namespace logkdv;
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);
    for (const std::string& kv : kv_args) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value argument, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const std::string& kv : tol_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--tol expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (grid > 0) cfg.set("grid", std::to_string(grid));
    if (parallel > 0) cfg.set("parallel", std::to_string(parallel));

    if (out_path.empty()) return run_command(name, cfg, std::cout);
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open output file: " + out_path);
    return run_command(name, cfg, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic traveling waves of the log-KdV equation: construction, "
                 "spectral indices, stability certificates and time evolution"};
    app.require_subcommand(1);

    static const char* names[] = {"wave",     "spectrum", "theta",  "table1",
                                  "table2",   "portrait", "evolve", "sweep"};
    static const char* blurbs[] = {
        "construct one periodic wave and dump its samples",
        "Hill-operator spectrum and inertial index of a wave",
        "Floquet theta index of a wave",
        "periods and theta indices against the bundled reference table",
        "stability indices against the bundled reference table",
        "phase-portrait orbit samples for plotting",
        "evolve a perturbed wave and track the orbital distance",
        "stability verdict over an (omega, A) parameter grid"};

    struct Opts {
        std::string config, out;
        int grid = 0, parallel = 0;
        std::vector<std::string> tols, kvs;
    };
    std::vector<Opts> opts(std::size(names));
    for (std::size_t i = 0; i < std::size(names); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", opts[i].config, "key=value config file");
        sub->add_option("--out", opts[i].out, "output CSV path (default stdout)");
        sub->add_option("--grid", opts[i].grid, "samples per period");
        sub->add_option("--parallel", opts[i].parallel, "concurrent rows");
        sub->add_option("--tol", opts[i].tols, "tolerance override key=value")
            ->take_all();
        sub->add_option("params", opts[i].kvs, "key=value parameter overrides")
            ->take_all();
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < std::size(names); ++i) {
        if (!app.got_subcommand(names[i])) continue;
        try {
            const int failed = run(names[i], opts[i].config, opts[i].out, opts[i].grid,
                                   opts[i].parallel, opts[i].tols, opts[i].kvs);
            return failed == 0 ? 0 : 1;
        } catch (const logkdv::ConfigError& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}
