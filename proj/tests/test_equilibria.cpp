#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chemostat/dynamics.hpp"
#include "chemostat/equilibria.hpp"
#include "chemostat/errors.hpp"
#include "chemostat/stability.hpp"
#include "support.hpp"

using namespace chemostat;

namespace {

const Model kModel = Model::monod();

// Reference values from the closed-form nullclines in support.hpp, frozen.
constexpr double kLambda1_07 = 0.4607843137254902;
constexpr double kLambda2_07 = 0.6666666666666666;
constexpr double kXTilde1_07 = 0.4015435961618689;
constexpr double kXTilde2_07 = 0.4242424242424242;
constexpr double kXBar1_07 = 0.24221453287197228;
constexpr double kXBar2_07 = 0.46711963115748595;

constexpr double kXTilde1_05 = 0.3136200716845878;
constexpr double kXTilde2_05 = 0.5396825396825398;
constexpr double kXBar1_05 = 0.2660406885758999;
constexpr double kXBar2_05 = 0.45219638242894056;

constexpr double kLambda1_02 = 0.39873417721518994;
constexpr double kLambda2_02 = 0.31578947368421056;
constexpr double kXTilde1_02 = 0.14315852923447855;
constexpr double kXTilde2_02 = 0.45614035087719285;

constexpr State kEstar05{0.5181200453001131, 0.14911287278218216, 0.23719642632439883};
constexpr double kF1Half05 = 0.22609819121447028;

const SteadyState* find_kind(const std::vector<SteadyState>& v, EquilibriumKind k) {
    for (const auto& s : v) {
        if (s.kind == k) return &s;
    }
    return nullptr;
}

}  // namespace

TEST(BreakEven, ReferenceValues) {
    EXPECT_NEAR(*break_even(Species::first, 0.7, kModel), kLambda1_07, 1e-12);
    EXPECT_NEAR(*break_even(Species::second, 0.7, kModel), kLambda2_07, 1e-12);
    EXPECT_NEAR(*break_even(Species::first, 0.361063, kModel), 0.418289, 1e-6);
    EXPECT_NEAR(*break_even(Species::first, 0.2, kModel), kLambda1_02, 1e-12);
    EXPECT_NEAR(*break_even(Species::second, 0.2, kModel), kLambda2_02, 1e-12);
}

TEST(BreakEven, UndefinedWhenRemovalOutpacesGrowth) {
    // D1 = 0.2 D + 0.8 reaches m1 = 4 at D = 16
    EXPECT_FALSE(break_even(Species::first, 16.0, kModel).has_value());
    EXPECT_FALSE(break_even(Species::first, 20.0, kModel).has_value());
    EXPECT_TRUE(break_even(Species::first, 15.9, kModel).has_value());
    EXPECT_THROW(break_even(Species::first, 0.0, kModel), ParameterError);
}

TEST(BreakEven, MatchesClosedFormOnRandomParameters) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> Dd(0.01, 3.0);
    for (int k = 0; k < 500; ++k) {
        const BioParams p = support::random_params(rng);
        const Model m = Model::monod(p);
        const double D = Dd(rng);
        for (Species i : {Species::first, Species::second}) {
            const auto ref = support::lambda(i, D, p);
            const auto got = break_even(i, D, m);
            ASSERT_EQ(ref.has_value(), got.has_value());
            if (ref) {
                EXPECT_LE(std::abs(*got - *ref), 1e-9 * std::max(1.0, *ref));
            }
        }
    }
}

TEST(BreakEven, GenericGrowthModel) {
    const BioParams p;
    const Model m = support::exponential_model(p);
    // m (1 - exp(-S/K)) = D_i  =>  S = -K log(1 - D_i/m)
    const double D = 0.7;
    const double D1 = 0.94;
    EXPECT_NEAR(*break_even(Species::first, D, m), -1.5 * std::log(1.0 - D1 / 4.0), 1e-10);
}

TEST(XTilde, ReferenceValues) {
    EXPECT_NEAR(*x_tilde(Species::first, {1.0, 0.7}, kModel), kXTilde1_07, 1e-10);
    EXPECT_NEAR(*x_tilde(Species::second, {1.0, 0.7}, kModel), kXTilde2_07, 1e-10);
    EXPECT_NEAR(*x_tilde(Species::first, {kLambda1_07, 0.7}, kModel), 0.0, 1e-12);
}

TEST(XBar, ReferenceValues) {
    EXPECT_NEAR(*x_bar(Species::first, {1.0, 0.7}, kModel), kXBar1_07, 1e-10);
    EXPECT_NEAR(*x_bar(Species::second, {1.0, 0.7}, kModel), kXBar2_07, 1e-10);
    EXPECT_NEAR(*x_bar(Species::first, {1.0, 0.5}, kModel), kXBar1_05, 1e-10);
    EXPECT_NEAR(*x_bar(Species::second, {1.0, 0.5}, kModel), kXBar2_05, 1e-10);
    // S_in below lambda_2: species 2 cannot grow even with x1 = 0
    EXPECT_FALSE(x_bar(Species::first, {0.5, 0.7}, kModel).has_value());
}

TEST(XBar, MatchesClosedFormOnRandomParameters) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 500; ++k) {
        const BioParams p = support::random_params(rng);
        const Model m = Model::monod(p);
        const OperatingPoint op = support::random_point(rng);
        for (Species i : {Species::first, Species::second}) {
            const auto ref = support::x_bar(i, op, p);
            const auto got = x_bar(i, op, m);
            ASSERT_EQ(ref.has_value(), got.has_value()) << k;
            if (ref) {
                EXPECT_LE(std::abs(*got - *ref), 1e-9 * std::max(1.0, *ref));
            }
        }
    }
}

TEST(CurveF, EndpointIdentities) {
    const OperatingPoint op{1.0, 0.5};
    EXPECT_NEAR(curve_F(Species::first, kXTilde1_05, op, kModel), 0.0, 1e-9);
    EXPECT_NEAR(curve_F(Species::first, 0.0, op, kModel), kXBar2_05, 1e-9);
    EXPECT_NEAR(curve_F(Species::second, 0.0, op, kModel), kXTilde2_05, 1e-9);
    EXPECT_NEAR(curve_F(Species::second, kXBar1_05, op, kModel), 0.0, 1e-9);
    EXPECT_NEAR(curve_F(Species::first, kXTilde1_05 / 2, op, kModel), kF1Half05, 1e-10);
}

TEST(CurveF, DomainViolationsThrow) {
    const OperatingPoint op{1.0, 0.5};
    EXPECT_THROW(curve_F(Species::first, kXTilde1_05 * 1.01, op, kModel), DomainError);
    EXPECT_THROW(curve_F(Species::second, -0.01, op, kModel), DomainError);
    EXPECT_THROW(curve_F(Species::first, 0.0, {0.3, 0.5}, kModel), DomainError);
}

TEST(CurveF, DecreasingAndMatchesSlopeFormulas) {
    std::mt19937_64 rng(23);
    int sets = 0;
    while (sets < 500) {
        const BioParams p = support::random_params(rng);
        const Model m = Model::monod(p);
        const OperatingPoint op = support::random_point(rng);
        const auto xt1 = x_tilde(Species::first, op, m);
        const auto xb1 = x_bar(Species::first, op, m);
        const auto xt2 = x_tilde(Species::second, op, m);
        if (!xt1 || !xt2 || *xt1 <= 1e-3 || *xt2 <= 0.0 || !xb1 || *xb1 <= 1e-3) continue;
        ++sets;
        const double D = op.D, D1 = m.removal(Species::first, D), D2 = m.removal(Species::second, D);
        for (Species which : {Species::first, Species::second}) {
            const double hi = which == Species::first ? *xt1 : *xb1;
            double prev = curve_F(which, 0.0, op, m);
            for (int k = 1; k <= 8; ++k) {
                const double x1 = hi * k / 8.0;
                const double v = curve_F(which, x1, op, m);
                EXPECT_LT(v, prev);
                prev = v;
            }
            for (double t : {0.25, 0.5, 0.75}) {
                const double x1 = hi * t;
                const double x2 = curve_F(which, x1, op, m);
                const double h = 1e-6 * hi;
                const double fd = (curve_F(which, x1 + h, op, m) - curve_F(which, x1 - h, op, m)) / (2 * h);
                const double S = op.S_in - D1 * x1 / D - D2 * x2 / D;
                const double E = m.growth->d_substrate(Species::first, S, x2);
                const double F = m.growth->d_substrate(Species::second, S, x1);
                const double G = -m.growth->d_other(Species::first, S, x2);
                const double H = -m.growth->d_other(Species::second, S, x1);
                const double slope = which == Species::first ? -D1 * E / (D2 * E + D * G) : -(D1 * F + D * H) / (D2 * F);
                EXPECT_LE(std::abs(fd - slope) / std::abs(slope), 1e-4);
                // the closed-form lines agree with the bisection values
                const double ref = which == Species::first ? support::F1(x1, op, p) : support::F2(x1, op, p);
                EXPECT_NEAR(x2, ref, 1e-9 * std::max(1.0, ref));
            }
        }
    }
}

TEST(ClassifyCase, ReferencePoints) {
    const auto c07 = classify_case({1.0, 0.7}, kModel);
    EXPECT_EQ(c07.value, Case::Case1);
    EXPECT_NEAR(*c07.x_tilde1, kXTilde1_07, 1e-10);
    EXPECT_NEAR(*c07.x_bar2, kXBar2_07, 1e-10);
    const auto c05 = classify_case({1.0, 0.5}, kModel);
    EXPECT_EQ(c05.value, Case::Case2);
    EXPECT_LT(*c05.x_bar1, *c05.x_tilde1);
    EXPECT_LT(*c05.x_bar2, *c05.x_tilde2);
    EXPECT_EQ(classify_case({1.0, 0.2}, kModel).value, Case::Case3);
    EXPECT_EQ(classify_case({0.3, 0.5}, kModel).value, Case::Undefined);
    // on lambda_1 exactly
    EXPECT_EQ(classify_case({kLambda1_07, 0.7}, kModel).value, Case::Undefined);
}

TEST(ClassifyCase, DegenerateOnCollisionCurve) {
    // at the E2 = Estar collision on S_in = 1, x-_2 = x~_2
    const double sigma3 = 0.6447339586;
    const auto c = classify_case({1.0, sigma3}, kModel);
    EXPECT_NEAR(*c.x_bar2, *c.x_tilde2, 1e-9);
    const auto solved = [&] {
        double lo = 0.64, hi = 0.65;
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            const auto cc = classify_case({1.0, mid}, kModel);
            (*cc.x_tilde2 - *cc.x_bar2 > 0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    EXPECT_EQ(classify_case({1.0, solved}, kModel).value, Case::Degenerate);
}

TEST(FindSteadyStates, ReferencePoint07) {
    const auto ss = find_steady_states({1.0, 0.7}, kModel);
    ASSERT_EQ(ss.size(), 3u);
    EXPECT_EQ(ss[0].kind, EquilibriumKind::E0);
    EXPECT_EQ(ss[0].state, (State{1.0, 0.0, 0.0}));
    EXPECT_EQ(ss[0].residual, 0.0);
    EXPECT_NEAR(ss[1].state[0], kLambda1_07, 1e-10);
    EXPECT_NEAR(ss[1].state[1], kXTilde1_07, 1e-10);
    EXPECT_EQ(ss[1].state[2], 0.0);
    EXPECT_NEAR(ss[2].state[0], kLambda2_07, 1e-10);
    EXPECT_NEAR(ss[2].state[2], kXTilde2_07, 1e-10);
    EXPECT_EQ(find_kind(ss, EquilibriumKind::Estar), nullptr);
}

TEST(FindSteadyStates, CoexistenceAt05) {
    const auto ss = find_steady_states({1.0, 0.5}, kModel);
    ASSERT_EQ(ss.size(), 4u);
    const auto* e = find_kind(ss, EquilibriumKind::Estar);
    ASSERT_NE(e, nullptr);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(e->state[k], kEstar05[k], 1e-10);
    EXPECT_NEAR(e->state[0], 0.5181, 1e-4);
    EXPECT_NEAR(e->state[1], 0.1491, 1e-4);
    EXPECT_NEAR(e->state[2], 0.2371, 1e-4);
    EXPECT_LE(e->residual, 1e-8);
    for (double v : rhs(e->state, {1.0, 0.5}, kModel)) EXPECT_LE(std::abs(v), 1e-8);
}

TEST(FindSteadyStates, ExclusionAt02) {
    const auto ss = find_steady_states({1.0, 0.2}, kModel);
    ASSERT_EQ(ss.size(), 3u);
    EXPECT_NEAR(ss[1].state[1], kXTilde1_02, 1e-10);
    EXPECT_NEAR(ss[2].state[0], kLambda2_02, 1e-10);
    EXPECT_NEAR(ss[2].state[2], kXTilde2_02, 1e-10);
}

TEST(FindSteadyStates, WashoutOnlyBelowBreakEven) {
    const auto ss = find_steady_states({1.0, 5.0}, kModel);
    ASSERT_EQ(ss.size(), 1u);
    EXPECT_EQ(ss[0].kind, EquilibriumKind::E0);
}

TEST(FindSteadyStates, InvalidOperatingPoint) {
    EXPECT_THROW(find_steady_states({0.0, 0.5}, kModel), ParameterError);
    EXPECT_THROW(find_steady_states({1.0, -0.1}, kModel), ParameterError);
    EXPECT_THROW(find_steady_states({std::nan(""), 0.5}, kModel), ParameterError);
}

TEST(FindSteadyStates, RandomSweepInvariants) {
    std::mt19937_64 rng(24);
    int coexistence = 0;
    for (int k = 0; k < 2000; ++k) {
        const BioParams p = support::random_params(rng);
        const Model m = Model::monod(p);
        const OperatingPoint op = support::random_point(rng);
        const auto label = classify_case(op, m);
        const auto ss = find_steady_states(op, m);
        const double bound = omega_bound(op, m);
        for (const auto& s : ss) {
            EXPECT_LE(s.residual, 1e-8);
            EXPECT_LE(s.state[0] + s.state[1] + s.state[2], bound + 1e-8);
            switch (s.kind) {
                case EquilibriumKind::E0: EXPECT_TRUE(s.state[1] == 0.0 && s.state[2] == 0.0); break;
                case EquilibriumKind::E1: EXPECT_TRUE(s.state[1] > 0.0 && s.state[2] == 0.0); break;
                case EquilibriumKind::E2: EXPECT_TRUE(s.state[1] == 0.0 && s.state[2] > 0.0); break;
                case EquilibriumKind::Estar: EXPECT_TRUE(s.state[1] > 0.0 && s.state[2] > 0.0); break;
            }
        }
        const auto* e = find_kind(ss, EquilibriumKind::Estar);
        if (label.value == Case::Degenerate) continue;
        EXPECT_EQ(e != nullptr, label.value == Case::Case2) << k;
        if (!e) continue;
        ++coexistence;
        const State ref = support::coexistence(op, p);
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(e->state[c], ref[c], 1e-8 * std::max(1.0, std::abs(ref[c])));

        // uniqueness: one sign change of F1 - F2 on a fine grid
        const double hi = std::min(*label.x_tilde1, *label.x_bar1);
        int changes = 0;
        double prev = curve_F(Species::first, 0.0, op, m) - curve_F(Species::second, 0.0, op, m);
        for (int g = 1; g <= 10000; ++g) {
            const double x1 = hi * g / 10000.0;
            const double v = support::F1(x1, op, p) - support::F2(x1, op, p);
            if ((v > 0) != (prev > 0)) ++changes;
            prev = v;
        }
        EXPECT_EQ(changes, 1);

        // slope ordering at the intersection
        const auto [S, x1, x2] = e->state;
        const double D = op.D, D1 = m.removal(Species::first, D), D2 = m.removal(Species::second, D);
        const double E = m.growth->d_substrate(Species::first, S, x2);
        const double F = m.growth->d_substrate(Species::second, S, x1);
        const double G = -m.growth->d_other(Species::first, S, x2);
        const double H = -m.growth->d_other(Species::second, S, x1);
        EXPECT_GT(-D1 * E / (D2 * E + D * G) + (D1 * F + D * H) / (D2 * F), 0.0);
    }
    EXPECT_GT(coexistence, 20);
}

TEST(FindSteadyStates, GenericGrowthModelSatisfiesRhs) {
    const BioParams p;
    const Model m = support::exponential_model(p);
    for (double D : {0.2, 0.5, 0.7, 1.5}) {
        const OperatingPoint op{1.0, D};
        for (const auto& s : find_steady_states(op, m)) {
            for (double v : rhs(s.state, op, m)) EXPECT_LE(std::abs(v), 1e-8);
        }
    }
}

TEST(FindSteadyStates, YieldsRescaleBiomass) {
    BioParams p;
    p.yield = {0.5, 0.8};
    const Model m = Model::monod(p);
    const OperatingPoint op{2.0, 0.7};
    const auto ss = find_steady_states(op, m);
    for (const auto& s : ss) EXPECT_LE(s.residual, 1e-8);
    // f1(S, 0) = Y1 mu1(S, 0), so lambda_1 solves 0.5 * 4 S / (1.5 + S) = 0.94
    ASSERT_GE(ss.size(), 2u);
    ASSERT_EQ(ss[1].kind, EquilibriumKind::E1);
    EXPECT_NEAR(ss[1].state[0], 1.5 * 0.94 / (2.0 - 0.94), 1e-10);
}

TEST(MembraneSet, Membership) {
    const auto M = MembraneSet::at({1.0, 0.5}, kModel);
    EXPECT_DOUBLE_EQ(M.D1, 0.9);
    EXPECT_DOUBLE_EQ(M.D2, 0.45);
    EXPECT_TRUE(M.contains(0.0, 0.0));
    EXPECT_TRUE(M.contains(kEstar05[1], kEstar05[2]));
    EXPECT_FALSE(M.contains(0.6, 0.0));
    EXPECT_FALSE(M.contains(-0.1, 0.0));
}

TEST(OmegaBound, Value) {
    // min(D, D1, D2) = min(0.5, 0.9, 0.45)
    EXPECT_DOUBLE_EQ(omega_bound({1.0, 0.5}, kModel), 0.5 / 0.45);
}
