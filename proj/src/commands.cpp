#include "chemostat/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "chemostat/errors.hpp"
#include "chemostat/format.hpp"
#include "chemostat/parallel.hpp"
#include "chemostat/svg.hpp"

namespace chemostat {

namespace {

namespace fs = std::filesystem;

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return kExitOk;
    } catch (const IntegrationError& e) {
        err << "error: " << e.what() << " at t = " << format_number(e.time()) << ", state (" << format_number(e.state()[0])
            << ", " << format_number(e.state()[1]) << ", " << format_number(e.state()[2]) << ")\n";
        return kExitIntegrator;
    } catch (const ConsistencyError& e) {
        err << "internal consistency error: " << e.what() << '\n';
        return kExitConsistency;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

class OutputDir {
  public:
    explicit OutputDir(const OutputConfig& cfg) : dir_(cfg.directory) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw ParameterError("cannot create output directory " + dir_.string());
    }

    std::ofstream open(const std::string& name) {
        const auto path = dir_ / name;
        std::ofstream os(path);
        if (!os) throw ParameterError("cannot write " + path.string());
        written_.push_back(path);
        return os;
    }

    void report(std::ostream& out) const {
        for (const auto& p : written_) out << "wrote " << p.string() << '\n';
    }

  private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + ' ' : s + std::string(width - s.size(), ' ');
}

std::string kind_name(EquilibriumKind k) { return std::string(to_string(k)); }

std::string profile_cell(Presence p) {
    switch (p) {
        case Presence::Absent: return "";
        case Presence::Stable: return "S";
        case Presence::Unstable: return "U";
        case Presence::Marginal: return "M";
    }
    return "?";
}

std::string curve_list(const std::vector<CurveId>& ids) {
    std::string s;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) s += ';';
        s += to_string(ids[k]);
    }
    return s;
}

std::string padded_index(std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", k);
    return buf;
}

}  // namespace

int cmd_steady_states(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        if (!cfg.point) throw ParameterError("steady-states needs an operating point");
        const Model model = Model::monod(cfg.parameters);
        const OperatingPoint op{cfg.point->S_in, cfg.point->D};

        const auto states = find_steady_states(op, model);
        std::vector<StabilityReport> reports;
        for (const auto& ss : states) reports.push_back(classify(ss, op, model));
        const auto region = classify_region(op, model);

        // one set of formatted cells feeds both the report and the CSV
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < states.size(); ++k) {
            const auto& s = states[k];
            const auto& r = reports[k];
            std::vector<std::string> row{kind_name(s.kind),
                                         format_number(s.state[0]),
                                         format_number(s.state[1]),
                                         format_number(s.state[2]),
                                         format_number(s.residual),
                                         std::string(to_string(r.classification)),
                                         std::string(to_string(r.method))};
            for (const auto& ev : r.eigenvalues) {
                row.push_back(format_number(ev.real()));
                row.push_back(format_number(ev.imag()));
            }
            row.push_back(std::string(to_string(region.label)));
            rows.push_back(std::move(row));
        }
        const std::vector<std::string> header{"kind",    "S",       "x1",      "x2",      "residual",
                                              "stability", "method", "eig1_re", "eig1_im", "eig2_re",
                                              "eig2_im", "eig3_re", "eig3_im", "region"};

        out << "S_in = " << format_number(op.S_in) << ", D = " << format_number(op.D) << '\n';
        out << "region " << to_string(region.label) << "  (E0 E1 E2 Estar: " << to_string(region.profile) << ")\n";
        for (std::size_t c = 0; c < 7; ++c) out << pad(header[c], c == 0 ? 6 : 20);
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < 7; ++c) out << pad(row[c], c == 0 ? 6 : 20);
            out << '\n';
        }

        if (cfg.output.wants(OutputFormat::csv)) {
            OutputDir dir(cfg.output);
            auto os = dir.open("steady_states.csv");
            for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
            os << '\n';
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
                os << '\n';
            }
            dir.report(out);
        }
    });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        if (!cfg.point) throw ParameterError("simulate needs an operating point");
        if (cfg.initial_conditions.empty()) throw ParameterError("simulate needs at least one initial condition");
        const Model model = Model::monod(cfg.parameters);
        const OperatingPoint op{cfg.point->S_in, cfg.point->D};
        const auto equilibria = find_steady_states(op, model);

        const auto& ics = cfg.initial_conditions;
        std::vector<Trajectory> trajectories(ics.size());
        parallel_for(ics.size(), [&](std::size_t k) {
            trajectories[k] = integrate(ics[k], op, model, cfg.integrator, equilibria);
        });

        OutputDir dir(cfg.output);
        const std::vector<std::string> header{"ic", "S0", "x1_0", "x2_0", "attractor", "t_final",
                                              "S", "x1", "x2", "steps"};
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < ics.size(); ++k) {
            const auto& t = trajectories[k];
            const auto& f = t.final_state();
            rows.push_back({std::to_string(k + 1), format_number(ics[k][0]), format_number(ics[k][1]),
                            format_number(ics[k][2]), attractor_name(t.settled_on), format_number(t.times.back()),
                            format_number(f[0]), format_number(f[1]), format_number(f[2]),
                            std::to_string(t.stats.accepted)});
        }

        out << "S_in = " << format_number(op.S_in) << ", D = " << format_number(op.D) << '\n';
        for (const auto& h : header) out << pad(h, h == "ic" ? 5 : 16);
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << pad(row[c], c == 0 ? 5 : 16);
            out << '\n';
        }

        if (cfg.output.wants(OutputFormat::csv)) {
            for (std::size_t k = 0; k < ics.size(); ++k) {
                auto os = dir.open("trajectory_" + padded_index(k + 1) + ".csv");
                write_trajectory_csv(os, trajectories[k]);
            }
            auto os = dir.open("simulate_summary.csv");
            for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
            os << '\n';
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
                os << '\n';
            }
        }
        if (cfg.output.wants(OutputFormat::svg)) {
            auto os = dir.open("phase_portrait.svg");
            render_phase_portrait(os, trajectories, equilibria);
        }
        dir.report(out);
    });
}

int cmd_operating_diagram(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        if (!cfg.grid) throw ParameterError("operating-diagram needs a grid");
        const Model model = Model::monod(cfg.parameters);
        const auto& g = *cfg.grid;
        const Interval S_range{g.S_in_min, g.S_in_max};
        const Interval D_range{g.D_min, g.D_max};

        const auto grid = grid_diagram(S_range, D_range, g.resolution, g.resolution, model);
        std::vector<Codim2Candidate> codim2;
        for (auto& c : codim2_candidates(model, D_range)) {
            if (c.S_in >= S_range.lo && c.S_in <= S_range.hi) codim2.push_back(std::move(c));
        }

        std::map<Region, std::size_t> counts;
        for (Region r : grid.labels) ++counts[r];
        out << "grid " << g.resolution << " x " << g.resolution << " over S_in in [" << format_number(S_range.lo)
            << ", " << format_number(S_range.hi) << "], D in [" << format_number(D_range.lo) << ", "
            << format_number(D_range.hi) << "]\n";
        for (const auto& [r, n] : counts) out << "  " << pad(std::string(to_string(r)), 10) << n << " cells\n";
        for (const auto& c : grid.curves) {
            out << "  curve " << pad(std::string(to_string(c.id)), 4) << c.samples.size() << " samples\n";
        }
        for (const auto& c : codim2) {
            out << "  codim-2 candidate (" << format_number(c.S_in) << ", " << format_number(c.D) << ") "
                << to_string(c.kind) << " on " << curve_list(c.curves) << '\n';
        }

        OutputDir dir(cfg.output);
        if (cfg.output.wants(OutputFormat::csv)) {
            {
                auto os = dir.open("regions.csv");
                write_grid_csv(os, grid);
            }
            {
                auto os = dir.open("curves.csv");
                write_curves_csv(os, grid.curves);
            }
            auto os = dir.open("codim2.csv");
            os << "S_in,D,kind,curves,S,x1,x2\n";
            for (const auto& c : codim2) {
                os << format_number(c.S_in) << ',' << format_number(c.D) << ',' << to_string(c.kind) << ','
                   << curve_list(c.curves) << ',' << format_number(c.state[0]) << ',' << format_number(c.state[1])
                   << ',' << format_number(c.state[2]) << '\n';
            }
        }
        if (cfg.output.wants(OutputFormat::svg)) {
            auto os = dir.open("operating_diagram.svg");
            render_operating_diagram(os, grid, codim2);
        }
        dir.report(out);
    });
}

int cmd_bifurcation(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.validate();
        if (!cfg.line) throw ParameterError("bifurcation needs a line (S_in with a D range)");
        const Model model = Model::monod(cfg.parameters);
        const auto& l = *cfg.line;
        const Interval D_range{l.D_min, l.D_max};

        const auto points = scan_dilution(l.S_in, D_range, model);
        std::vector<double> Ds(l.samples);
        for (std::size_t k = 0; k < l.samples; ++k) {
            Ds[k] = l.D_min + (l.D_max - l.D_min) * double(k) / double(l.samples - 1);
        }
        const auto rows = branch_table(l.S_in, Ds, model);

        // one representative D inside each interval between consecutive critical values
        std::vector<double> cuts{l.D_max};
        for (const auto& p : points) cuts.push_back(p.value);
        cuts.push_back(l.D_min);
        std::vector<double> mids;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) mids.push_back(0.5 * (cuts[k] + cuts[k + 1]));
        const auto summary = branch_table(l.S_in, mids, model);

        out << "S_in = " << format_number(l.S_in) << ", D in [" << format_number(l.D_min) << ", "
            << format_number(l.D_max) << "]\n";
        out << "transcritical points (decreasing D):\n";
        for (std::size_t k = 0; k < points.size(); ++k) {
            const auto& p = points[k];
            out << "  sigma" << k + 1 << " = " << pad(format_number(p.value), 16) << pad(std::string(p.type), 14)
                << to_string(p.first) << " = " << to_string(p.second) << "  (" << to_string(p.curve) << ")\n";
        }
        out << pad("D interval", 36) << "E0 E1 E2 Estar\n";
        for (std::size_t k = 0; k < summary.size(); ++k) {
            std::string interval = "(" + format_number(cuts[k + 1]) + ", " + format_number(cuts[k]) + ")";
            out << pad(interval, 36);
            for (Presence p : summary[k].profile) out << pad(profile_cell(p), 3);
            out << '\n';
        }

        OutputDir dir(cfg.output);
        if (cfg.output.wants(OutputFormat::csv)) {
            {
                auto os = dir.open("bifurcation_points.csv");
                os << "D,type,curve,first,second\n";
                for (const auto& p : points) {
                    os << format_number(p.value) << ',' << p.type << ',' << to_string(p.curve) << ','
                       << to_string(p.first) << ',' << to_string(p.second) << '\n';
                }
            }
            auto os = dir.open("branches.csv");
            os << "D,kind,S,x1,x2,stability\n";
            for (const auto& row : rows) {
                for (std::size_t k = 0; k < row.states.size(); ++k) {
                    const auto& s = row.states[k];
                    os << format_number(row.D) << ',' << to_string(s.kind) << ',' << format_number(s.state[0]) << ','
                       << format_number(s.state[1]) << ',' << format_number(s.state[2]) << ','
                       << to_string(row.reports[k].classification) << '\n';
                }
            }
        }
        if (cfg.output.wants(OutputFormat::svg)) {
            auto os = dir.open("bifurcation.svg");
            render_bifurcation(os, rows, points, l.S_in, model, D_range);
        }
        dir.report(out);
    });
}

}  // namespace chemostat
