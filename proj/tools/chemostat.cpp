// Command-line front end: chemostat <subcommand> [options]

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemostat/commands.hpp"
#include "chemostat/config.hpp"
#include "chemostat/errors.hpp"

using namespace chemostat;

namespace {

struct Overrides {
    std::vector<double> point;
    std::vector<double> S_range;
    std::vector<double> D_range;
    std::optional<double> S_in;
    std::optional<std::size_t> resolution;
    std::optional<std::size_t> samples;
    std::vector<std::vector<double>> ics;
    std::optional<std::size_t> random;
    std::uint64_t seed = 1;
    std::optional<double> t_end;
};

void clear_modes(RunConfig& cfg) {
    cfg.point.reset();
    cfg.line.reset();
    cfg.grid.reset();
}

void apply_point(RunConfig& cfg, const Overrides& o) {
    if (!o.point.empty()) {
        clear_modes(cfg);
        cfg.point = PointMode{o.point[0], o.point[1]};
    } else if (!cfg.point && !cfg.line && !cfg.grid) {
        cfg.point = PointMode{};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-species chemostat with interspecific density dependence"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> formats;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", formats, "comma-separated output formats: csv, svg");
    app.add_flag("--print-config", print_config, "print the effective configuration as JSON and exit");

    Overrides o;
    auto* steady = app.add_subcommand("steady-states", "steady states, their stability, and the region label");
    steady->add_option("--point", o.point, "operating point S_in,D")->delimiter(',')->expected(2);

    auto* simulate = app.add_subcommand("simulate", "integrate trajectories and report where they settle");
    simulate->add_option("--point", o.point, "operating point S_in,D")->delimiter(',')->expected(2);
    simulate->add_option("--ic", o.ics, "initial condition S,x1,x2 (repeatable)")->delimiter(',')->allow_extra_args(false);
    simulate->add_option("--random", o.random, "number of random positive initial conditions");
    simulate->add_option("--seed", o.seed, "seed for --random");
    simulate->add_option("--t-end", o.t_end, "integration horizon");

    auto* diagram = app.add_subcommand("operating-diagram", "label a grid over (S_in, D) and trace the boundary curves");
    diagram->add_option("--S-range", o.S_range, "S_in window lo,hi")->delimiter(',')->expected(2);
    diagram->add_option("--D-range", o.D_range, "D window lo,hi")->delimiter(',')->expected(2);
    diagram->add_option("--resolution", o.resolution, "cells per axis");

    auto* bifurcation = app.add_subcommand("bifurcation", "transcritical points and branches along D at fixed S_in");
    bifurcation->add_option("--S-in", o.S_in, "input substrate concentration");
    bifurcation->add_option("--D-range", o.D_range, "D range lo,hi")->delimiter(',')->expected(2);
    bifurcation->add_option("--samples", o.samples, "D samples in the branch table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    for (const auto& ic : o.ics) {
        if (ic.size() != 3) {
            std::cerr << "error: --ic takes three values S,x1,x2\n";
            return kExitConfig;
        }
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (out_dir) cfg.output.directory = *out_dir;
        if (formats) cfg.output.formats = parse_formats(*formats);

        if (steady->parsed()) {
            apply_point(cfg, o);
        } else if (simulate->parsed()) {
            apply_point(cfg, o);
            if (o.t_end) cfg.integrator.t_end = *o.t_end;
            if (!o.ics.empty()) {
                cfg.initial_conditions.clear();
                for (const auto& ic : o.ics) cfg.initial_conditions.push_back({ic[0], ic[1], ic[2]});
            }
            if (o.random && cfg.point) {
                const double scale = cfg.point->S_in;
                for (const auto& s : random_initial_conditions(*o.random, o.seed, scale, scale)) {
                    cfg.initial_conditions.push_back(s);
                }
            }
        } else if (diagram->parsed()) {
            if (!o.S_range.empty() || !o.D_range.empty() || o.resolution || (!cfg.point && !cfg.line && !cfg.grid)) {
                GridMode g = cfg.grid.value_or(GridMode{});
                if (!o.S_range.empty()) g.S_in_min = o.S_range[0], g.S_in_max = o.S_range[1];
                if (!o.D_range.empty()) g.D_min = o.D_range[0], g.D_max = o.D_range[1];
                if (o.resolution) g.resolution = *o.resolution;
                clear_modes(cfg);
                cfg.grid = g;
            }
        } else if (bifurcation->parsed()) {
            if (o.S_in || !o.D_range.empty() || o.samples || (!cfg.point && !cfg.line && !cfg.grid)) {
                LineMode l = cfg.line.value_or(LineMode{});
                if (o.S_in) l.S_in = *o.S_in;
                if (!o.D_range.empty()) l.D_min = o.D_range[0], l.D_max = o.D_range[1];
                if (o.samples) l.samples = *o.samples;
                clear_modes(cfg);
                cfg.line = l;
            }
        }
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (print_config) {
        std::cout << dump_config(cfg);
        return kExitOk;
    }

    try {
        if (steady->parsed()) return cmd_steady_states(cfg, std::cout, std::cerr);
        if (simulate->parsed()) return cmd_simulate(cfg, std::cout, std::cerr);
        if (diagram->parsed()) return cmd_operating_diagram(cfg, std::cout, std::cerr);
        return cmd_bifurcation(cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
