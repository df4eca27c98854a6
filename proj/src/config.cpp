#include "chemostat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chemostat/errors.hpp"

namespace chemostat {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ParameterError(std::string(where) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParameterError("unknown key \"" + key + "\" in " + std::string(where));
        }
    }
}

void read(const json& obj, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParameterError(std::string(key) + " must be a number");
    out = v.get<double>();
}

void read(const json& obj, const char* key, std::size_t& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) throw ParameterError(std::string(key) + " must be a nonnegative integer");
    out = v.get<std::size_t>();
}

BioParams read_params(const json& j) {
    check_keys(j, "parameters", {"m1", "m2", "K1", "K2", "beta1", "beta2", "alpha1", "alpha2", "a1", "a2", "Y1", "Y2"});
    BioParams p;
    read(j, "m1", p.m[0]);
    read(j, "m2", p.m[1]);
    read(j, "K1", p.K[0]);
    read(j, "K2", p.K[1]);
    read(j, "beta1", p.beta[0]);
    read(j, "beta2", p.beta[1]);
    read(j, "alpha1", p.alpha[0]);
    read(j, "alpha2", p.alpha[1]);
    read(j, "a1", p.death[0]);
    read(j, "a2", p.death[1]);
    read(j, "Y1", p.yield[0]);
    read(j, "Y2", p.yield[1]);
    return p;
}

json write_params(const BioParams& p) {
    return {{"m1", p.m[0]},         {"m2", p.m[1]},         {"K1", p.K[0]},         {"K2", p.K[1]},
            {"beta1", p.beta[0]},   {"beta2", p.beta[1]},   {"alpha1", p.alpha[0]}, {"alpha2", p.alpha[1]},
            {"a1", p.death[0]},     {"a2", p.death[1]},     {"Y1", p.yield[0]},     {"Y2", p.yield[1]}};
}

IntegratorConfig read_integrator(const json& j) {
    check_keys(j, "integrator", {"rtol", "atol", "h_init", "h_max", "t_end", "convergence_radius", "settle_steps"});
    IntegratorConfig c;
    read(j, "rtol", c.rtol);
    read(j, "atol", c.atol);
    read(j, "h_init", c.h_init);
    read(j, "h_max", c.h_max);
    read(j, "t_end", c.t_end);
    read(j, "convergence_radius", c.convergence_radius);
    read(j, "settle_steps", c.settle_steps);
    return c;
}

json write_integrator(const IntegratorConfig& c) {
    return {{"rtol", c.rtol},   {"atol", c.atol},   {"h_init", c.h_init}, {"h_max", c.h_max},
            {"t_end", c.t_end}, {"convergence_radius", c.convergence_radius}, {"settle_steps", c.settle_steps}};
}

OutputConfig read_output(const json& j) {
    check_keys(j, "output", {"directory", "formats"});
    OutputConfig o;
    if (j.contains("directory")) {
        if (!j["directory"].is_string()) throw ParameterError("output.directory must be a string");
        o.directory = j["directory"].get<std::string>();
    }
    if (j.contains("formats")) {
        const auto& f = j["formats"];
        if (!f.is_array()) throw ParameterError("output.formats must be an array");
        o.formats.clear();
        for (const auto& item : f) {
            if (!item.is_string()) throw ParameterError("output.formats entries must be strings");
            for (auto fmt : parse_formats(item.get<std::string>())) o.formats.push_back(fmt);
        }
    }
    return o;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

}  // namespace

bool OutputConfig::wants(OutputFormat f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "svg"; }

std::vector<OutputFormat> parse_formats(std::string_view list) {
    std::vector<OutputFormat> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const auto item = list.substr(start, comma - start);
        if (item == "csv") {
            out.push_back(OutputFormat::csv);
        } else if (item == "svg") {
            out.push_back(OutputFormat::svg);
        } else {
            throw ParameterError("unknown output format \"" + std::string(item) + "\" (expected csv or svg)");
        }
        start = comma + 1;
    }
    return out;
}

void RunConfig::validate() const {
    parameters.validate();
    integrator.validate();
    const int modes = int(point.has_value()) + int(line.has_value()) + int(grid.has_value());
    if (modes > 1) throw ParameterError("only one of point, line, grid may be set");
    if (point) OperatingPoint{point->S_in, point->D}.validate();
    if (line) {
        require_finite(line->D_max, "line.D_max");
        OperatingPoint{line->S_in, line->D_min}.validate();
        if (!(line->D_max > line->D_min)) throw ParameterError("line.D_max must exceed line.D_min");
        if (line->samples < 2) throw ParameterError("line.samples must be at least 2");
    }
    if (grid) {
        require_finite(grid->S_in_max, "grid.S_in_max");
        require_finite(grid->D_max, "grid.D_max");
        if (!(grid->S_in_min >= 0.0 && grid->S_in_max > grid->S_in_min)) {
            throw ParameterError("grid needs 0 <= S_in_min < S_in_max");
        }
        if (!(grid->D_min >= 0.0 && grid->D_max > grid->D_min)) throw ParameterError("grid needs 0 <= D_min < D_max");
        if (grid->resolution < 2) throw ParameterError("grid.resolution must be at least 2");
    }
    if (output.formats.empty()) throw ParameterError("output.formats must not be empty");
    if (output.directory.empty()) throw ParameterError("output.directory must not be empty");
    for (const auto& ic : initial_conditions) {
        for (double v : ic) {
            if (!(std::isfinite(v) && v >= 0.0)) throw ParameterError("initial conditions must be finite and nonnegative");
        }
    }
}

RunConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config", {"parameters", "point", "line", "grid", "integrator", "output", "initial_conditions"});

    RunConfig cfg;
    try {
        if (j.contains("parameters")) cfg.parameters = read_params(j["parameters"]);
        if (j.contains("point")) {
            check_keys(j["point"], "point", {"S_in", "D"});
            PointMode m;
            read(j["point"], "S_in", m.S_in);
            read(j["point"], "D", m.D);
            cfg.point = m;
        }
        if (j.contains("line")) {
            check_keys(j["line"], "line", {"S_in", "D_min", "D_max", "samples"});
            LineMode m;
            read(j["line"], "S_in", m.S_in);
            read(j["line"], "D_min", m.D_min);
            read(j["line"], "D_max", m.D_max);
            read(j["line"], "samples", m.samples);
            cfg.line = m;
        }
        if (j.contains("grid")) {
            check_keys(j["grid"], "grid", {"S_in_min", "S_in_max", "D_min", "D_max", "resolution"});
            GridMode m;
            read(j["grid"], "S_in_min", m.S_in_min);
            read(j["grid"], "S_in_max", m.S_in_max);
            read(j["grid"], "D_min", m.D_min);
            read(j["grid"], "D_max", m.D_max);
            read(j["grid"], "resolution", m.resolution);
            cfg.grid = m;
        }
        if (j.contains("integrator")) cfg.integrator = read_integrator(j["integrator"]);
        if (j.contains("output")) cfg.output = read_output(j["output"]);
        if (j.contains("initial_conditions")) {
            const auto& ics = j["initial_conditions"];
            if (!ics.is_array()) throw ParameterError("initial_conditions must be an array");
            for (const auto& ic : ics) {
                if (!ic.is_array() || ic.size() != 3) {
                    throw ParameterError("each initial condition must be [S, x1, x2]");
                }
                State s{};
                for (std::size_t k = 0; k < 3; ++k) {
                    if (!ic[k].is_number()) throw ParameterError("initial condition entries must be numbers");
                    s[k] = ic[k].get<double>();
                }
                cfg.initial_conditions.push_back(s);
            }
        }
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["parameters"] = write_params(cfg.parameters);
    if (cfg.point) j["point"] = {{"S_in", cfg.point->S_in}, {"D", cfg.point->D}};
    if (cfg.line) {
        j["line"] = {{"S_in", cfg.line->S_in},
                     {"D_min", cfg.line->D_min},
                     {"D_max", cfg.line->D_max},
                     {"samples", cfg.line->samples}};
    }
    if (cfg.grid) {
        j["grid"] = {{"S_in_min", cfg.grid->S_in_min},
                     {"S_in_max", cfg.grid->S_in_max},
                     {"D_min", cfg.grid->D_min},
                     {"D_max", cfg.grid->D_max},
                     {"resolution", cfg.grid->resolution}};
    }
    j["integrator"] = write_integrator(cfg.integrator);
    json formats = json::array();
    for (auto f : cfg.output.formats) formats.push_back(std::string(to_string(f)));
    j["output"] = {{"directory", cfg.output.directory}, {"formats", formats}};
    json ics = json::array();
    for (const auto& s : cfg.initial_conditions) ics.push_back({s[0], s[1], s[2]});
    j["initial_conditions"] = ics;
    return j.dump(2) + "\n";
}

std::vector<State> random_initial_conditions(std::size_t n, std::uint64_t seed, double S_max, double x_max) {
    if (!(S_max > 0.0 && x_max > 0.0)) throw ParameterError("initial-condition box must have positive size");
    std::mt19937_64 rng(seed);
    // (0, 1]: reflect the half-open [0, 1) draw
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<State> out(n);
    for (auto& s : out) {
        s = {S_max * (1.0 - unit(rng)), x_max * (1.0 - unit(rng)), x_max * (1.0 - unit(rng))};
    }
    return out;
}

}  // namespace chemostat
