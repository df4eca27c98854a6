#ifndef CHEMOSTAT_COMMANDS_HPP
#define CHEMOSTAT_COMMANDS_HPP

/**
 * @file commands.hpp
 * @brief Subcommands of the chemostat tool. Each writes a report to `out`,
 *        diagnostics to `err`, files into cfg.output.directory, and returns
 *        the process exit code.
 */

#include <iosfwd>

#include "chemostat/config.hpp"

namespace chemostat {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,      ///< unexpected runtime error
    kExitConfig = 2,       ///< invalid configuration or arguments
    kExitConsistency = 3,  ///< analytic and numeric results disagree
    kExitIntegrator = 4,   ///< step-size underflow during integration
};

/// Needs point mode. Writes steady_states.csv.
int cmd_steady_states(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Needs point mode and at least one initial condition. Writes trajectory_NNN.csv,
/// simulate_summary.csv, and phase_portrait.svg.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Needs grid mode. Writes regions.csv, curves.csv, codim2.csv, and operating_diagram.svg.
int cmd_operating_diagram(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Needs line mode. Writes bifurcation_points.csv, branches.csv, and bifurcation.svg.
int cmd_bifurcation(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace chemostat

#endif  // CHEMOSTAT_COMMANDS_HPP
