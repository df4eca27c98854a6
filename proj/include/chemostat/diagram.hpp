#ifndef CHEMOSTAT_DIAGRAM_HPP
#define CHEMOSTAT_DIAGRAM_HPP

/**
 * @file diagram.hpp
 * @brief Operating diagram over (S_in, D): boundary curves, region labels,
 *        one-parameter scans in D, and codimension-two candidate points.
 *
 * Boundary curves:
 *   U1   S_in = lambda_1(D)          E0 and E1 collide
 *   U2   S_in = lambda_2(D)          E0 and E2 collide
 *   U1c  x~_1(S_in, D) = x-_1(S_in, D)   E1 and Estar collide
 *   U2c  x~_2(S_in, D) = x-_2(S_in, D)   E2 and Estar collide
 *
 * Regions:
 *   J0  S_in < min(lambda_1, lambda_2)               E0 stable
 *   J1  lambda_1 < S_in < lambda_2                   E1 stable
 *   J2  lambda_2 < S_in < lambda_1                   E2 stable
 *   J3  S_in > max(lambda_i), x-_i < x~_i (i=1,2)     E1, E2 stable, Estar unstable
 *   J4  S_in > max(lambda_i), x-_1 > x~_1, x-_2 < x~_2   E2 stable
 *   J5  S_in > max(lambda_i), x-_1 < x~_1, x-_2 > x~_2   E1 stable
 */

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chemostat/equilibria.hpp"
#include "chemostat/stability.hpp"

namespace chemostat {

struct Interval {
    double lo;
    double hi;

    bool operator==(const Interval&) const = default;
};

enum class Region { J0, J1, J2, J3, J4, J5, Boundary };

std::string_view to_string(Region r);
/// Fill color used when drawing the region.
std::string_view region_color(Region r);

enum class Presence { Absent, Stable, Unstable, Marginal };

/// Presence of E0, E1, E2, Estar in that order.
using Profile = std::array<Presence, 4>;

/// e.g. "U S S U"; '-' marks an absent steady state.
std::string to_string(const Profile& p);

/// Existence/stability profile implied by a region label. Throws for Boundary.
Profile expected_profile(Region r);

/// Profile computed from find_steady_states and classify.
Profile compute_profile(const OperatingPoint& op, const Model& model);

struct OperatingRegion {
    Region label;
    Profile profile;
};

/**
 * @brief Region containing `op`.
 *
 * The label is decided from break-even comparisons and the case
 * classification, then checked against compute_profile(); a mismatch throws
 * ConsistencyError. Points within the tie band of a boundary, or with a
 * marginal steady state, are labeled Boundary.
 */
OperatingRegion classify_region(const OperatingPoint& op, const Model& model);

enum class CurveId { U1, U2, U1c, U2c };

inline constexpr std::array<CurveId, 4> kAllCurves{CurveId::U1, CurveId::U2, CurveId::U1c, CurveId::U2c};

std::string_view to_string(CurveId id);
std::string_view curve_color(CurveId id);

/// The pair of steady states that collide when the curve is crossed.
std::pair<EquilibriumKind, EquilibriumKind> collision(CurveId id);

/**
 * @brief Defining residual of a boundary curve at (S_in, D).
 *
 * U1: S_in - lambda_1; U2: S_in - lambda_2; U1c: x~_1 - x-_1; U2c: x~_2 - x-_2.
 * The last two are only defined for S_in >= max(lambda_1, lambda_2).
 */
std::optional<double> curve_residual(CurveId id, const OperatingPoint& op, const Model& model);

struct TraceOptions {
    double S_in_max = 100.0;        ///< upper end of the S_in search window
    std::size_t scan_points = 256;  ///< points of the fallback bracketing scan
};

/// S_in on curve `id` at dilution rate D, searched near `hint` first when given.
std::optional<double> solve_curve(CurveId id, double D, const Model& model, std::optional<double> hint = {},
                                  const TraceOptions& opts = {});

struct CurvePoint {
    double S_in;
    double D;
};

struct BoundaryCurve {
    CurveId id;
    std::vector<CurvePoint> samples;    ///< ordered by increasing D
    std::vector<CurvePoint> endpoints;  ///< samples where the curve starts or stops existing
};

/// n samples evenly spaced over D_range (D <= 0 skipped), warm-started from the previous sample.
BoundaryCurve trace_boundary(CurveId id, Interval D_range, std::size_t n, const Model& model,
                             const TraceOptions& opts = {});

struct BifurcationPoint {
    double value;  ///< critical dilution rate
    CurveId curve;
    EquilibriumKind first;
    EquilibriumKind second;
    std::string_view type = "transcritical";
};

/**
 * @brief Transcritical points met along the line S_in = const as D varies.
 *
 * Sign changes of the four curve residuals are located on `grid` log-spaced
 * points over D_range and refined by bisection to 1e-10. Sorted by
 * decreasing D.
 */
std::vector<BifurcationPoint> scan_dilution(double S_in, Interval D_range, const Model& model,
                                            std::size_t grid = 2000);

struct BranchRow {
    double D;
    Profile profile;
    std::vector<SteadyState> states;
    std::vector<StabilityReport> reports;
};

std::vector<BranchRow> branch_table(double S_in, std::span<const double> D_values, const Model& model);

struct DiagramGrid {
    Interval S_range;
    Interval D_range;
    std::size_t nS = 0;
    std::size_t nD = 0;
    std::vector<Region> labels;  ///< labels[j * nS + i] for S cell i, D cell j
    std::vector<BoundaryCurve> curves;

    double S_center(std::size_t i) const { return S_range.lo + (i + 0.5) * (S_range.hi - S_range.lo) / nS; }
    double D_center(std::size_t j) const { return D_range.lo + (j + 0.5) * (D_range.hi - D_range.lo) / nD; }
    Region at(std::size_t i, std::size_t j) const { return labels[j * nS + i]; }
};

/// Labels every cell at its center (in parallel) and traces the four curves with curve_samples points each.
DiagramGrid grid_diagram(Interval S_range, Interval D_range, std::size_t nS, std::size_t nD, const Model& model,
                         std::size_t curve_samples = 400);

enum class Codim2Kind {
    CurveIntersection,  ///< two or more boundary curves meet
    NeutralSaddle,      ///< on U_i, the washout eigenvalues -D and f_j(S_in,0) - D_j sum to zero
    ZeroDilutionLimit,  ///< washout boundary as D -> 0+, where the -D eigenvalue also vanishes
};

std::string_view to_string(Codim2Kind k);

struct Codim2Candidate {
    double S_in;
    double D;
    std::vector<CurveId> curves;
    State state;
    Codim2Kind kind;
};

/**
 * @brief Candidate codimension-two points within D_range.
 *
 * Only locations are computed; no normal-form typing. The zero-dilution
 * limit is reported when D_range.lo <= 0.
 */
std::vector<Codim2Candidate> codim2_candidates(const Model& model, Interval D_range, std::size_t grid = 2000);

void write_grid_csv(std::ostream& os, const DiagramGrid& grid);
void write_curves_csv(std::ostream& os, std::span<const BoundaryCurve> curves);

}  // namespace chemostat

#endif  // CHEMOSTAT_DIAGRAM_HPP
