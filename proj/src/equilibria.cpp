#include "chemostat/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemostat/dynamics.hpp"
#include "chemostat/roots.hpp"

namespace chemostat {

namespace {

double sign_tol_width(double hi) { return roots::kArgTol * std::max(1.0, std::abs(hi)); }

struct Rates {
    double D, D1, D2;
};

Rates rates_at(const OperatingPoint& op, const Model& model) {
    return {op.D, model.removal(Species::first, op.D), model.removal(Species::second, op.D)};
}

// Sign of a comparison, 0 inside the tie band.
int tie_sign(double v) {
    if (v > kTieBand) return 1;
    if (v < -kTieBand) return -1;
    return 0;
}

}  // namespace

void OperatingPoint::validate() const {
    if (!(std::isfinite(S_in) && S_in > 0.0)) throw ParameterError("S_in must be positive");
    if (!(std::isfinite(D) && D > 0.0)) throw ParameterError("D must be positive");
}

std::string_view to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::E0: return "E0";
        case EquilibriumKind::E1: return "E1";
        case EquilibriumKind::E2: return "E2";
        case EquilibriumKind::Estar: return "Estar";
    }
    return "?";
}

std::string_view to_string(Case c) {
    switch (c) {
        case Case::Case1: return "Case1";
        case Case::Case2: return "Case2";
        case Case::Case3: return "Case3";
        case Case::Undefined: return "Undefined";
        case Case::Degenerate: return "Degenerate";
    }
    return "?";
}

MembraneSet MembraneSet::at(const OperatingPoint& op, const Model& model) {
    const auto r = rates_at(op, model);
    return {r.D, r.D1, r.D2, op.S_in};
}

bool MembraneSet::contains(double x1, double x2) const {
    return x1 >= 0.0 && x2 >= 0.0 && D1 * x1 + D2 * x2 <= D * S_in;
}

std::optional<double> break_even(Species i, double D, const Model& model) {
    if (!(std::isfinite(D) && D > 0.0)) throw ParameterError("D must be positive");
    const double Di = model.removal(i, D);
    if (!(Di < model.growth->sup_rate(i))) return std::nullopt;

    const auto g = [&](double S) { return model.rate(i, S, 0.0) - Di; };
    double hi = 1.0;
    for (int k = 0; k < 2000 && g(hi) < 0.0; ++k) {
        hi *= 2.0;
        if (!std::isfinite(hi)) return std::nullopt;
    }
    if (g(hi) < 0.0) return std::nullopt;
    return roots::bisect(g, 0.0, hi, sign_tol_width(hi));
}

std::optional<double> x_tilde(Species i, const OperatingPoint& op, const Model& model) {
    const auto lam = break_even(i, op.D, model);
    if (!lam) return std::nullopt;
    return op.D * (op.S_in - *lam) / model.removal(i, op.D);
}

std::optional<double> x_bar(Species i, const OperatingPoint& op, const Model& model) {
    const Species j = other(i);
    const double Di = model.removal(i, op.D);
    const double Dj = model.removal(j, op.D);
    const auto g = [&](double x) {
        const double S = std::max(0.0, op.S_in - Di * x / op.D);
        return model.rate(j, S, x) - Dj;
    };
    const double hi = op.D * op.S_in / Di;
    if (g(0.0) < 0.0) return std::nullopt;
    return roots::bisect(g, 0.0, hi, sign_tol_width(hi));
}

double curve_F(Species which, double x1, const OperatingPoint& op, const Model& model) {
    const auto r = rates_at(op, model);
    double x1_max = 0.0;
    if (which == Species::first) {
        const auto xt = x_tilde(Species::first, op, model);
        if (!xt || *xt < 0.0) throw DomainError("F1 requires S_in > lambda_1(D)");
        x1_max = *xt;
    } else {
        const auto lam2 = break_even(Species::second, op.D, model);
        const auto xb = x_bar(Species::first, op, model);
        if (!lam2 || op.S_in < *lam2 || !xb) throw DomainError("F2 requires S_in > lambda_2(D)");
        x1_max = *xb;
    }
    if (x1 < -kTieBand || x1 > x1_max + kTieBand) {
        throw DomainError("x1 = " + std::to_string(x1) + " outside the domain of F" +
                          std::to_string(number(which)));
    }
    x1 = std::clamp(x1, 0.0, x1_max);

    const double S_left = op.S_in - r.D1 * x1 / r.D;
    const double Dk = which == Species::first ? r.D1 : r.D2;
    const auto h = [&](double x2) {
        const double S = std::max(0.0, S_left - r.D2 * x2 / r.D);
        return which == Species::first ? model.rate(Species::first, S, x2) - Dk
                                       : model.rate(Species::second, S, x1) - Dk;
    };
    if (h(0.0) <= 0.0) return 0.0;
    const double hi = std::max(0.0, (r.D * op.S_in - r.D1 * x1) / r.D2);
    const auto root = roots::bisect(h, 0.0, hi, sign_tol_width(hi));
    if (!root) throw ConsistencyError("F" + std::to_string(number(which)) + " root not bracketed");
    return *root;
}

CaseLabel classify_case(const OperatingPoint& op, const Model& model) {
    op.validate();
    CaseLabel label;
    const auto lam1 = break_even(Species::first, op.D, model);
    const auto lam2 = break_even(Species::second, op.D, model);
    if (!lam1 || !lam2 || op.S_in <= *lam1 || op.S_in <= *lam2) return label;

    const auto r = rates_at(op, model);
    label.x_tilde1 = op.D * (op.S_in - *lam1) / r.D1;
    label.x_tilde2 = op.D * (op.S_in - *lam2) / r.D2;
    label.x_bar1 = x_bar(Species::first, op, model);
    label.x_bar2 = x_bar(Species::second, op, model);
    if (!label.x_bar1 || !label.x_bar2) {
        label.value = Case::Degenerate;
        return label;
    }

    const int s1 = tie_sign(*label.x_bar1 - *label.x_tilde1);
    const int s2 = tie_sign(*label.x_bar2 - *label.x_tilde2);

    // x-_1 < x~_1  <=>  f_2(lambda_1, x~_1) < D_2, and symmetrically
    const int e1 = tie_sign(model.rate(Species::second, *lam1, *label.x_tilde1) - r.D2);
    const int e2 = tie_sign(model.rate(Species::first, *lam2, *label.x_tilde2) - r.D1);
    if ((s1 != 0 && e1 != 0 && s1 != e1) || (s2 != 0 && e2 != 0 && s2 != e2)) {
        throw ConsistencyError("case classification: x-/x~ ordering disagrees with the growth-rate test");
    }

    if (s1 == 0 || s2 == 0) {
        label.value = Case::Degenerate;
    } else if (s1 < 0 && s2 > 0) {
        label.value = Case::Case1;
    } else if (s1 < 0 && s2 < 0) {
        label.value = Case::Case2;
    } else if (s1 > 0 && s2 < 0) {
        label.value = Case::Case3;
    } else {
        throw ConsistencyError("x-_1 > x~_1 and x-_2 > x~_2 cannot hold together");
    }
    return label;
}

double steady_residual(const State& s, const OperatingPoint& op, const Model& model) {
    const State f = rhs(s, op, model);
    return std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
}

double omega_bound(const OperatingPoint& op, const Model& model) {
    const auto r = rates_at(op, model);
    return op.D * op.S_in / std::min({r.D, r.D1, r.D2});
}

std::vector<SteadyState> find_steady_states(const OperatingPoint& op, const Model& model) {
    op.validate();
    const auto r = rates_at(op, model);
    std::vector<SteadyState> out;

    const auto push = [&](EquilibriumKind kind, const State& s) {
        const double res = steady_residual(s, op, model);
        if (!(res <= kResidualTol)) {
            throw ConsistencyError(std::string(to_string(kind)) + " residual " + std::to_string(res) +
                                   " exceeds tolerance");
        }
        out.push_back({kind, s, res});
    };

    push(EquilibriumKind::E0, {op.S_in, 0.0, 0.0});

    const auto lam1 = break_even(Species::first, op.D, model);
    if (lam1 && op.S_in > *lam1) push(EquilibriumKind::E1, {*lam1, op.D * (op.S_in - *lam1) / r.D1, 0.0});

    const auto lam2 = break_even(Species::second, op.D, model);
    if (lam2 && op.S_in > *lam2) push(EquilibriumKind::E2, {*lam2, 0.0, op.D * (op.S_in - *lam2) / r.D2});

    const CaseLabel label = classify_case(op, model);
    if (label.value == Case::Case2) {
        // F = F_1 - F_2 increases from x-_2 - x~_2 < 0 at 0 to F_1(x-_1) > 0 at x-_1
        const auto F = [&](double x1) {
            return curve_F(Species::first, x1, op, model) - curve_F(Species::second, x1, op, model);
        };
        const double hi = *label.x_bar1;
        const auto x1 = roots::bisect(F, 0.0, hi, sign_tol_width(hi));
        if (!x1) throw ConsistencyError("coexistence root not bracketed in Case 2");
        const double x2 = curve_F(Species::first, *x1, op, model);
        const double S = op.S_in - r.D1 * *x1 / r.D - r.D2 * x2 / r.D;
        if (!(S > 0.0 && *x1 > 0.0 && x2 > 0.0)) {
            throw ConsistencyError("coexistence steady state left the positive orthant");
        }
        push(EquilibriumKind::Estar, {S, *x1, x2});
    }
    return out;
}

}  // namespace chemostat
