#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "chemostat/diagram.hpp"
#include "chemostat/errors.hpp"
#include "support.hpp"

using namespace chemostat;

namespace {

const Model kModel = Model::monod();

constexpr double kSigma1 = 4.0;
constexpr double kSigma2 = 16.0 / 15.0;  // f2(1, 0) = 2.2/3 = 0.5 D + 0.2

// S_in on U1c at D by bisection on the closed-form residual x~1 - x-1.
double u1c_reference(double D, const BioParams& p) {
    double lo = std::max(*support::lambda(Species::first, D, p), *support::lambda(Species::second, D, p));
    double hi = 100.0;
    const auto r = [&](double S) {
        const OperatingPoint op{S, D};
        return *support::x_tilde(Species::first, op, p) - support::x_bar(Species::first, op, p).value_or(0.0);
    };
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((r(lo) > 0) == (r(mid) > 0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(ClassifyRegion, ReferencePoints) {
    EXPECT_EQ(classify_region({1.0, 0.7}, kModel).label, Region::J5);
    EXPECT_EQ(classify_region({1.0, 0.2}, kModel).label, Region::J4);
    EXPECT_EQ(classify_region({1.0, 0.5}, kModel).label, Region::J3);
    EXPECT_EQ(classify_region({1.0, 2.0}, kModel).label, Region::J1);
    EXPECT_EQ(classify_region({1.0, 5.0}, kModel).label, Region::J0);
    // lambda_2 < S_in < lambda_1 below the U1/U2 crossing
    EXPECT_EQ(classify_region({0.3, 0.1}, kModel).label, Region::J2);
    EXPECT_EQ(to_string(classify_region({1.0, 0.5}, kModel).profile), "U S S U");
}

TEST(ClassifyRegion, BoundaryWithinTieBand) {
    const double lam = *break_even(Species::first, 0.7, kModel);
    EXPECT_EQ(classify_region({lam, 0.7}, kModel).label, Region::Boundary);
    EXPECT_EQ(classify_region({lam + 1e-3, 0.7}, kModel).label, Region::J1);
}

TEST(ClassifyRegion, ExpectedProfiles) {
    EXPECT_EQ(to_string(expected_profile(Region::J0)), "S - - -");
    EXPECT_EQ(to_string(expected_profile(Region::J4)), "U U S -");
    EXPECT_EQ(to_string(expected_profile(Region::J5)), "U S U -");
    EXPECT_THROW(expected_profile(Region::Boundary), ParameterError);
}

TEST(ClassifyRegion, RandomPointsAgreeWithProfile) {
    std::mt19937_64 rng(51);
    int labeled = 0;
    std::set<Region> seen;
    for (int k = 0; k < 1000; ++k) {
        const BioParams p = support::random_params(rng);
        const Model m = Model::monod(p);
        const OperatingPoint op = support::random_point(rng);
        const auto r = classify_region(op, m);  // throws on a mismatch
        if (r.label == Region::Boundary) continue;
        ++labeled;
        seen.insert(r.label);
        EXPECT_EQ(r.profile, expected_profile(r.label));
    }
    EXPECT_GT(labeled, 990);
    EXPECT_EQ(seen.size(), 6u);
}

TEST(CurveResidual, DefinedOnlyAboveBothBreakEvens) {
    EXPECT_FALSE(curve_residual(CurveId::U1c, {0.3, 0.5}, kModel).has_value());
    EXPECT_NEAR(*curve_residual(CurveId::U1, {1.0, 0.7}, kModel), 1.0 - 0.4607843137254902, 1e-12);
    EXPECT_NEAR(*curve_residual(CurveId::U2c, {1.0, 0.5}, kModel), 0.5396825396825398 - 0.45219638242894056, 1e-10);
}

TEST(TraceBoundary, ExplicitCurves) {
    const auto u1 = trace_boundary(CurveId::U1, {0.1, 2.0}, 20, kModel);
    ASSERT_EQ(u1.samples.size(), 20u);
    for (const auto& s : u1.samples) {
        EXPECT_NEAR(s.S_in, *support::lambda(Species::first, s.D, kModel.params), 1e-10);
    }
    const double u2 = *solve_curve(CurveId::U2, 0.361063, kModel);
    EXPECT_NEAR(u2, 0.418289, 1e-5);
    EXPECT_NEAR(*solve_curve(CurveId::U1, 0.7, kModel), 0.4607, 1e-4);
}

TEST(TraceBoundary, U1cPassesThroughSigma4) {
    const auto s = solve_curve(CurveId::U1c, 0.3520689, kModel);
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(*s, 1.0, 1e-4);
    EXPECT_NEAR(*s, u1c_reference(0.3520689, kModel.params), 1e-9);
    EXPECT_NEAR(*solve_curve(CurveId::U1c, 0.352, kModel), u1c_reference(0.352, kModel.params), 1e-9);
}

TEST(TraceBoundary, CoexistenceCurvesAgainstReference) {
    for (CurveId id : {CurveId::U1c, CurveId::U2c}) {
        const auto c = trace_boundary(id, {0.05, 2.0}, 200, kModel);
        ASSERT_FALSE(c.samples.empty());
        for (std::size_t k = 1; k < c.samples.size(); ++k) EXPECT_GT(c.samples[k].D, c.samples[k - 1].D);
        for (const auto& s : c.samples) {
            const auto r = curve_residual(id, {s.S_in, s.D}, kModel);
            ASSERT_TRUE(r.has_value());
            EXPECT_LE(std::abs(*r), 1e-8);
        }
        // both curves stop existing at the U1/U2 crossing D ~ 0.3611
        const auto near_crossing = std::any_of(c.endpoints.begin(), c.endpoints.end(),
                                               [](const CurvePoint& e) { return std::abs(e.D - 0.3611) < 0.011; });
        EXPECT_TRUE(near_crossing);
    }
    const auto u1c = trace_boundary(CurveId::U1c, {0.3, 0.36}, 7, kModel);
    for (const auto& s : u1c.samples) EXPECT_NEAR(s.S_in, u1c_reference(s.D, kModel.params), 1e-8);
}

TEST(TraceBoundary, EmptyOverRangeIsNotAnError) {
    const auto c = trace_boundary(CurveId::U1c, {1.0, 2.0}, 10, kModel);
    EXPECT_TRUE(c.samples.empty());
    EXPECT_THROW(trace_boundary(CurveId::U1, {0.1, 2.0}, 1, kModel), ParameterError);
}

TEST(ScanDilution, FourTranscriticalPoints) {
    const auto pts = scan_dilution(1.0, {0.05, 5.0}, kModel);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_NEAR(pts[0].value, kSigma1, 1e-8);
    EXPECT_NEAR(pts[1].value, kSigma2, 1e-8);
    EXPECT_NEAR(pts[2].value, 0.6447, 5e-4);
    EXPECT_NEAR(pts[3].value, 0.352, 5e-4);
    EXPECT_EQ(pts[0].curve, CurveId::U1);
    EXPECT_EQ(pts[1].curve, CurveId::U2);
    EXPECT_EQ(pts[2].curve, CurveId::U2c);
    EXPECT_EQ(pts[3].curve, CurveId::U1c);
    EXPECT_EQ(pts[2].first, EquilibriumKind::E2);
    EXPECT_EQ(pts[2].second, EquilibriumKind::Estar);
    for (const auto& p : pts) EXPECT_EQ(p.type, "transcritical");
}

TEST(ScanDilution, CollidingStatesCoincide) {
    for (const auto& p : scan_dilution(1.0, {0.05, 5.0}, kModel)) {
        const auto ss = find_steady_states({1.0, p.value}, kModel);
        const SteadyState* a = nullptr;
        const SteadyState* b = nullptr;
        for (const auto& s : ss) {
            if (s.kind == p.first) a = &s;
            if (s.kind == p.second) b = &s;
        }
        ASSERT_NE(a, nullptr);
        if (!b) continue;  // the partner may sit exactly on its existence boundary
        for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(a->state[k] - b->state[k]), 1e-6);
    }
}

TEST(ScanDilution, InvariantUnderGridRefinement) {
    const auto coarse = scan_dilution(1.0, {0.05, 5.0}, kModel, 2000);
    const auto fine = scan_dilution(1.0, {0.05, 5.0}, kModel, 4000);
    ASSERT_EQ(coarse.size(), fine.size());
    for (std::size_t k = 0; k < coarse.size(); ++k) EXPECT_NEAR(coarse[k].value, fine[k].value, 1e-6);
}

TEST(ScanDilution, CrossingsSwapTheProfile) {
    const auto pts = scan_dilution(1.0, {0.05, 5.0}, kModel);
    const auto unstable_directions = [](const BranchRow& row, EquilibriumKind kind) {
        for (std::size_t k = 0; k < row.states.size(); ++k) {
            if (row.states[k].kind != kind) continue;
            int n = 0;
            for (const auto& ev : row.reports[k].eigenvalues) n += ev.real() > 0.0;
            return n;
        }
        return -1;
    };
    for (const auto& p : pts) {
        const std::vector<double> Ds{p.value * (1 + 1e-4), p.value * (1 - 1e-4)};
        const auto rows = branch_table(1.0, Ds, kModel);
        const auto& above = rows[0].profile;
        const auto& below = rows[1].profile;
        const auto a = static_cast<std::size_t>(p.first), b = static_cast<std::size_t>(p.second);
        for (std::size_t k = 0; k < 4; ++k) {
            if (k != a && k != b) {
                EXPECT_EQ(above[k], below[k]);
            }
        }
        // the partner exists on one side only
        EXPECT_NE(above[b] != Presence::Absent, below[b] != Presence::Absent);
        // the surviving state gains or loses exactly one unstable direction
        EXPECT_EQ(std::abs(unstable_directions(rows[0], p.first) - unstable_directions(rows[1], p.first)), 1);
    }
}

TEST(ScanDilution, FewerPointsAtLowInflow) {
    EXPECT_TRUE(scan_dilution(0.1, {0.05, 5.0}, kModel).empty());
    EXPECT_THROW(scan_dilution(0.0, {0.05, 5.0}, kModel), ParameterError);
    EXPECT_THROW(scan_dilution(1.0, {0.0, 5.0}, kModel), ParameterError);
}

TEST(BranchTable, RowsMatchRegionProfiles) {
    const std::vector<double> Ds{0.1, 0.45, 0.8, 2.0, 5.0};
    const auto rows = branch_table(1.0, Ds, kModel);
    ASSERT_EQ(rows.size(), Ds.size());
    EXPECT_EQ(to_string(rows[0].profile), "U U S -");
    EXPECT_EQ(to_string(rows[1].profile), "U S S U");
    EXPECT_EQ(to_string(rows[2].profile), "U S U -");
    EXPECT_EQ(to_string(rows[3].profile), "U S - -");
    EXPECT_EQ(to_string(rows[4].profile), "S - - -");
    EXPECT_EQ(rows[1].states.size(), rows[1].reports.size());
}

TEST(GridDiagram, VerticalLineOrder) {
    // D decreasing from 5 to 0.1 along S_in = 1
    std::vector<Region> order;
    for (double D = 5.0; D >= 0.1; D -= 0.01) {
        const Region r = classify_region({1.0, D}, kModel).label;
        if (r == Region::Boundary) continue;
        if (order.empty() || order.back() != r) order.push_back(r);
    }
    EXPECT_EQ(order, (std::vector<Region>{Region::J0, Region::J1, Region::J5, Region::J3, Region::J4}));
}

TEST(GridDiagram, AllSixRegionsAt200) {
    const auto g = grid_diagram({0.0, 1.0}, {0.0, 2.0}, 200, 200, kModel);
    ASSERT_EQ(g.labels.size(), 40000u);
    std::set<Region> seen(g.labels.begin(), g.labels.end());
    for (Region r : {Region::J0, Region::J1, Region::J2, Region::J3, Region::J4, Region::J5}) {
        EXPECT_TRUE(seen.count(r)) << to_string(r);
    }
    for (std::size_t j = 0; j < g.nD; ++j) {
        for (std::size_t i = 0; i < g.nS; ++i) {
            const double D = g.D_center(j), S = g.S_center(i);
            const double l1 = support::lambda(Species::first, D, kModel.params).value_or(INFINITY);
            const double l2 = support::lambda(Species::second, D, kModel.params).value_or(INFINITY);
            if (S < std::min(l1, l2) - 1e-9) {
                EXPECT_EQ(g.at(i, j), Region::J0);
            }
        }
    }
    ASSERT_EQ(g.curves.size(), 4u);
    for (const auto& c : g.curves) {
        for (const auto& s : c.samples) EXPECT_LE(std::abs(*curve_residual(c.id, {s.S_in, s.D}, kModel)), 1e-8);
    }
}

TEST(GridDiagram, WashoutOnlyWindow) {
    // min over D of lambda_i is 0.2 (D -> 0 on U2)
    const auto g = grid_diagram({0.0, 0.15}, {0.0, 2.0}, 20, 20, kModel, 0);
    for (Region r : g.labels) EXPECT_EQ(r, Region::J0);
    EXPECT_THROW(grid_diagram({0.0, 1.0}, {0.0, 2.0}, 1, 20, kModel), ParameterError);
}

TEST(Codim2, CurveIntersectionWithWashoutState) {
    const auto cands = codim2_candidates(kModel, {0.0, 3.0});
    const auto it = std::find_if(cands.begin(), cands.end(),
                                 [](const auto& c) { return c.kind == Codim2Kind::CurveIntersection; });
    ASSERT_NE(it, cands.end());
    EXPECT_NEAR(it->S_in, 0.418289, 1e-4);
    EXPECT_NEAR(it->D, 0.361063, 1e-4);
    EXPECT_EQ(it->state, (State{it->S_in, 0.0, 0.0}));
    for (CurveId id : {CurveId::U1, CurveId::U2}) {
        EXPECT_NE(std::find(it->curves.begin(), it->curves.end(), id), it->curves.end());
        EXPECT_LE(std::abs(*curve_residual(id, {it->S_in, it->D}, kModel)), 1e-6);
    }
    // lambda_1(D) = lambda_2(D) in closed form
    const double l1 = *support::lambda(Species::first, it->D, kModel.params);
    const double l2 = *support::lambda(Species::second, it->D, kModel.params);
    EXPECT_NEAR(l1, l2, 1e-9);
}

TEST(Codim2, SecondCandidateAndZeroDilutionLimit) {
    const auto cands = codim2_candidates(kModel, {0.0, 3.0});
    const auto near = [&](double S, double D, double tol) {
        return std::any_of(cands.begin(), cands.end(),
                           [&](const auto& c) { return std::abs(c.S_in - S) < tol && std::abs(c.D - D) < tol; });
    };
    EXPECT_TRUE(near(0.387348, 0.10468, 1e-4));
    EXPECT_TRUE(near(0.2, 0.0, 1e-5));
    // without D <= 0 in range the limit point is not reported
    const auto positive = codim2_candidates(kModel, {0.01, 3.0});
    EXPECT_TRUE(std::none_of(positive.begin(), positive.end(),
                             [](const auto& c) { return c.kind == Codim2Kind::ZeroDilutionLimit; }));
}

TEST(Codim2, NoIntersectionOutsideRange) {
    const auto cands = codim2_candidates(kModel, {1.0, 3.0});
    EXPECT_TRUE(cands.empty());
}

TEST(DiagramCsv, Headers) {
    const auto g = grid_diagram({0.0, 1.0}, {0.0, 2.0}, 3, 2, kModel, 5);
    std::ostringstream grid_os, curve_os;
    write_grid_csv(grid_os, g);
    write_curves_csv(curve_os, g.curves);
    const std::string grid_csv = grid_os.str(), curve_csv = curve_os.str();
    EXPECT_EQ(grid_csv.substr(0, grid_csv.find('\n')), "S_in,D,region");
    EXPECT_EQ(curve_csv.substr(0, curve_csv.find('\n')), "curve_id,S_in,D");
    EXPECT_EQ(std::count(grid_csv.begin(), grid_csv.end(), '\n'), 7);
    EXPECT_EQ(curve_color(CurveId::U1c), "red");
    EXPECT_EQ(region_color(Region::J3), "#f7f06a");
}
