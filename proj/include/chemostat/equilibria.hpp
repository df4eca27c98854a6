#ifndef CHEMOSTAT_EQUILIBRIA_HPP
#define CHEMOSTAT_EQUILIBRIA_HPP

/**
 * @file equilibria.hpp
 * @brief Break-even concentrations, boundary and coexistence steady states.
 *
 * Notation follows the usual chemostat conventions:
 *   lambda_i(D)  break-even concentration, f_i(lambda_i, 0) = D_i
 *   x~_i         biomass of species i alone, D (S_in - lambda_i) / D_i
 *   x-_i         root of f_j(S_in - D_i x_i / D, x_i) = D_j
 *   F_1, F_2     the two nullcline curves x_2 = F_k(x_1) in the (x_1, x_2) plane
 */

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "chemostat/growth.hpp"

namespace chemostat {

/// Band inside which a comparison is reported as a boundary rather than decided.
inline constexpr double kTieBand = 1e-9;
/// Maximum |rhs| accepted at a computed steady state.
inline constexpr double kResidualTol = 1e-8;

/// (S, x1, x2).
using State = std::array<double, 3>;

struct OperatingPoint {
    double S_in;  ///< input substrate concentration
    double D;     ///< dilution rate

    /// Both components must be finite and strictly positive.
    void validate() const;
};

enum class EquilibriumKind { E0, E1, E2, Estar };

std::string_view to_string(EquilibriumKind k);

struct SteadyState {
    EquilibriumKind kind;
    State state;
    double residual;  ///< max |rhs| at state
};

enum class Case { Case1, Case2, Case3, Undefined, Degenerate };

std::string_view to_string(Case c);

/// Three-case classification by the relative positions of x~_i and x-_i.
struct CaseLabel {
    Case value = Case::Undefined;
    std::optional<double> x_tilde1, x_bar1, x_tilde2, x_bar2;
};

/// The simplex M = {x >= 0 : D_1 x_1 / D + D_2 x_2 / D <= S_in}.
struct MembraneSet {
    double D, D1, D2, S_in;

    static MembraneSet at(const OperatingPoint& op, const Model& model);
    bool contains(double x1, double x2) const;
};

/**
 * @brief Break-even concentration lambda_i(D).
 *
 * Returns std::nullopt when species i cannot grow fast enough to balance its
 * removal rate, i.e. D_i >= sup_rate(i).
 */
std::optional<double> break_even(Species i, double D, const Model& model);

std::optional<double> x_tilde(Species i, const OperatingPoint& op, const Model& model);

/// Root of the decreasing map x -> f_j(S_in - D_i x / D, x) - D_j on [0, D S_in / D_i].
std::optional<double> x_bar(Species i, const OperatingPoint& op, const Model& model);

/**
 * @brief Nullcline F_k evaluated at x1.
 *
 * F_1 is defined on [0, x~_1] (requires S_in > lambda_1), F_2 on [0, x-_1]
 * (requires S_in > lambda_2). Throws DomainError outside.
 */
double curve_F(Species which, double x1, const OperatingPoint& op, const Model& model);

/// Throws ConsistencyError when the x-/x~ ordering and its equivalent growth-rate test disagree.
CaseLabel classify_case(const OperatingPoint& op, const Model& model);

/// All steady states in the order E0, E1, E2, Estar (absent ones omitted).
std::vector<SteadyState> find_steady_states(const OperatingPoint& op, const Model& model);

/// max |rhs(state)|.
double steady_residual(const State& s, const OperatingPoint& op, const Model& model);

/// D S_in / min(D, D_1, D_2): the bound on S + x1 + x2 defining the invariant region.
double omega_bound(const OperatingPoint& op, const Model& model);

}  // namespace chemostat

#endif  // CHEMOSTAT_EQUILIBRIA_HPP
