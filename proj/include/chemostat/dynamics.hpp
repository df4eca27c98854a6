#ifndef CHEMOSTAT_DYNAMICS_HPP
#define CHEMOSTAT_DYNAMICS_HPP

/**
 * @file dynamics.hpp
 * @brief Vector field, adaptive Dormand-Prince integration, and basin probing.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemostat/equilibria.hpp"

namespace chemostat {

/// (dS/dt, dx1/dt, dx2/dt) of the chemostat competition model.
State rhs(const State& s, const OperatingPoint& op, const Model& model);

struct IntegratorConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_init = 1e-3;
    double h_max = 1.0;
    double t_end = 500.0;
    double convergence_radius = 1e-6;
    /// Consecutive accepted steps inside convergence_radius before a trajectory counts as settled.
    std::size_t settle_steps = 50;

    void validate() const;
    bool operator==(const IntegratorConfig&) const = default;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    /// Smallest component of any accepted state before output clamping.
    double min_component = 0.0;
    /// Largest value of S + x1 + x2 - max(initial sum, omega_bound) over accepted states.
    double max_mass_excess = 0.0;
};

/// Accepted steps of one integration. States are clamped to be nonnegative.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    StepStats stats;
    std::optional<EquilibriumKind> settled_on;

    const State& final_state() const { return states.back(); }
};

class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double t, const State& state)
        : std::runtime_error(what), t_(t), state_(state) {}

    double time() const { return t_; }
    const State& state() const { return state_; }

  private:
    double t_;
    State state_;
};

/**
 * @brief Integrates from `ic` with an embedded 5(4) Runge-Kutta pair.
 *
 * Stops at cfg.t_end, or earlier once the state has stayed within
 * cfg.convergence_radius of one of `equilibria` for cfg.settle_steps
 * consecutive accepted steps. Throws IntegrationError on step-size underflow.
 */
Trajectory integrate(const State& ic, const OperatingPoint& op, const Model& model, const IntegratorConfig& cfg,
                     std::span<const SteadyState> equilibria);

/// As above, using find_steady_states(op, model) as the settling targets.
Trajectory integrate(const State& ic, const OperatingPoint& op, const Model& model,
                     const IntegratorConfig& cfg = {});

struct BasinLabel {
    State ic;
    std::optional<EquilibriumKind> attractor;  ///< std::nullopt when unsettled
};

/// Attractor label per initial condition, in input order. Integrations run in parallel.
std::vector<BasinLabel> basin_probe(const OperatingPoint& op, const Model& model, std::span<const State> ics,
                                    const IntegratorConfig& cfg = {});

/// "E1", ..., or "unsettled".
std::string attractor_name(const std::optional<EquilibriumKind>& k);

/// CSV with header `t,S,x1,x2`, one row per accepted step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace chemostat

#endif  // CHEMOSTAT_DYNAMICS_HPP
