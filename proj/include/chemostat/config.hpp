#ifndef CHEMOSTAT_CONFIG_HPP
#define CHEMOSTAT_CONFIG_HPP

/**
 * @file config.hpp
 * @brief Run configuration for the command-line tool, stored as JSON.
 *
 * Example:
 * @code{.json}
 * {
 *   "parameters": {"m1": 4, "m2": 2.2, "K1": 1.5, "K2": 2, "beta1": 1.2, "beta2": 0.1,
 *                  "alpha1": 0.2, "alpha2": 0.5, "a1": 0.8, "a2": 0.2, "Y1": 1, "Y2": 1},
 *   "point": {"S_in": 1, "D": 0.5},
 *   "integrator": {"rtol": 1e-8, "atol": 1e-10, "h_init": 0.001, "h_max": 1,
 *                  "t_end": 500, "convergence_radius": 1e-6, "settle_steps": 50},
 *   "output": {"directory": "out", "formats": ["csv", "svg"]},
 *   "initial_conditions": [[1, 0.3, 0.1]]
 * }
 * @endcode
 * Exactly one of "point", "line" or "grid" may be present. Missing keys take
 * their default values.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemostat/diagram.hpp"
#include "chemostat/dynamics.hpp"
#include "chemostat/growth.hpp"

namespace chemostat {

struct PointMode {
    double S_in = 1.0;
    double D = 0.5;

    bool operator==(const PointMode&) const = default;
};

/// Fixed S_in, D swept over [D_min, D_max].
struct LineMode {
    double S_in = 1.0;
    double D_min = 0.05;
    double D_max = 5.0;
    std::size_t samples = 400;  ///< D values of the branch table

    bool operator==(const LineMode&) const = default;
};

struct GridMode {
    double S_in_min = 0.0;
    double S_in_max = 1.0;
    double D_min = 0.0;
    double D_max = 2.0;
    std::size_t resolution = 200;  ///< cells per axis

    bool operator==(const GridMode&) const = default;
};

enum class OutputFormat { csv, svg };

struct OutputConfig {
    std::string directory = ".";
    std::vector<OutputFormat> formats{OutputFormat::csv};

    bool wants(OutputFormat f) const;
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    BioParams parameters;
    std::optional<PointMode> point;
    std::optional<LineMode> line;
    std::optional<GridMode> grid;
    IntegratorConfig integrator;
    OutputConfig output;
    std::vector<State> initial_conditions;

    /// Throws ParameterError when any part is invalid or more than one mode is set.
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

std::string_view to_string(OutputFormat f);
/// Parses a comma-separated list such as "csv,svg".
std::vector<OutputFormat> parse_formats(std::string_view list);

/// Parses JSON text. Throws ParameterError on syntax errors, unknown keys, or wrong types.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& cfg);

/// n initial conditions drawn uniformly from (0, S_max] x (0, x_max]^2.
std::vector<State> random_initial_conditions(std::size_t n, std::uint64_t seed, double S_max, double x_max);

}  // namespace chemostat

#endif  // CHEMOSTAT_CONFIG_HPP
