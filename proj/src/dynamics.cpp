#include "chemostat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "chemostat/format.hpp"
#include "chemostat/parallel.hpp"

namespace chemostat {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// difference between the 5th- and 4th-order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State combine(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [w, k] : terms) {
        for (int i = 0; i < 3; ++i) out[i] += h * w * (*k)[i];
    }
    return out;
}

double distance(const State& a, const State& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

State clamped(const State& s) { return {std::max(0.0, s[0]), std::max(0.0, s[1]), std::max(0.0, s[2])}; }

}  // namespace

State rhs(const State& s, const OperatingPoint& op, const Model& model) {
    const auto [S, x1, x2] = s;
    const double f1 = model.rate(Species::first, S, x2);
    const double f2 = model.rate(Species::second, S, x1);
    return {op.D * (op.S_in - S) - f1 * x1 - f2 * x2, (f1 - model.removal(Species::first, op.D)) * x1,
            (f2 - model.removal(Species::second, op.D)) * x2};
}

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0 && atol > 0.0)) throw ParameterError("rtol and atol must be positive");
    if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
    if (!(h_init > 0.0 && h_max > 0.0)) throw ParameterError("step bounds must be positive");
    if (!(convergence_radius > 0.0)) throw ParameterError("convergence_radius must be positive");
    if (settle_steps == 0) throw ParameterError("settle_steps must be at least 1");
}

Trajectory integrate(const State& ic, const OperatingPoint& op, const Model& model, const IntegratorConfig& cfg,
                     std::span<const SteadyState> equilibria) {
    op.validate();
    cfg.validate();
    for (double v : ic) {
        if (!(std::isfinite(v) && v >= 0.0)) throw ParameterError("initial condition must be nonnegative");
    }

    const double mass_bound = std::max(ic[0] + ic[1] + ic[2], omega_bound(op, model));

    Trajectory traj;
    traj.stats.min_component = std::min({ic[0], ic[1], ic[2]});
    traj.times.push_back(0.0);
    traj.states.push_back(ic);

    std::vector<std::size_t> streak(equilibria.size(), 0);
    const auto check_settled = [&](const State& y) {
        for (std::size_t k = 0; k < equilibria.size(); ++k) {
            streak[k] = distance(y, equilibria[k].state) <= cfg.convergence_radius ? streak[k] + 1 : 0;
            if (streak[k] >= cfg.settle_steps) {
                traj.settled_on = equilibria[k].kind;
                return true;
            }
        }
        return false;
    };

    double t = 0.0;
    State y = ic;
    State k1 = rhs(y, op, model);
    double h = std::min({cfg.h_init, cfg.h_max, cfg.t_end});
    bool last_rejected = false;

    while (t < cfg.t_end) {
        h = std::min(h, cfg.t_end - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            throw IntegrationError("step size underflow at t = " + format_number(t), t, y);
        }

        const State k2 = rhs(combine(y, h, {{a21, &k1}}), op, model);
        const State k3 = rhs(combine(y, h, {{a31, &k1}, {a32, &k2}}), op, model);
        const State k4 = rhs(combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), op, model);
        const State k5 = rhs(combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), op, model);
        const State k6 =
            rhs(combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), op, model);
        const State y_new = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(y_new, op, model);

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / 3.0);
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = (cfg.t_end - t - h <= 1e-14 * cfg.t_end) ? cfg.t_end : t + h;
            y = y_new;
            k1 = k7;
            ++traj.stats.accepted;
            traj.stats.min_component = std::min({traj.stats.min_component, y[0], y[1], y[2]});
            traj.stats.max_mass_excess = std::max(traj.stats.max_mass_excess, y[0] + y[1] + y[2] - mass_bound);
            traj.times.push_back(t);
            traj.states.push_back(clamped(y));
            if (check_settled(y)) break;

            double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (last_rejected) factor = std::min(factor, 1.0);
            h = std::min(h * factor, cfg.h_max);
            last_rejected = false;
        } else {
            ++traj.stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
        }
    }
    return traj;
}

Trajectory integrate(const State& ic, const OperatingPoint& op, const Model& model, const IntegratorConfig& cfg) {
    const auto eq = find_steady_states(op, model);
    return integrate(ic, op, model, cfg, eq);
}

std::vector<BasinLabel> basin_probe(const OperatingPoint& op, const Model& model, std::span<const State> ics,
                                    const IntegratorConfig& cfg) {
    const auto eq = find_steady_states(op, model);
    std::vector<BasinLabel> out(ics.size());
    parallel_for(ics.size(), [&](std::size_t k) {
        out[k] = {ics[k], integrate(ics[k], op, model, cfg, eq).settled_on};
    });
    return out;
}

std::string attractor_name(const std::optional<EquilibriumKind>& k) {
    return k ? std::string(to_string(*k)) : std::string("unsettled");
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,S,x1,x2\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.states[k];
        os << format_number(traj.times[k]) << ',' << format_number(s[0]) << ',' << format_number(s[1]) << ','
           << format_number(s[2]) << '\n';
    }
}

}  // namespace chemostat
