#include "chemostat/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chemostat {

namespace {

Stability from_margin(double growth) {
    // `growth` > 0 means a perturbation grows
    if (growth < -kTieBand) return Stability::LES;
    if (growth > kTieBand) return Stability::Unstable;
    return Stability::Marginal;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ConsistencyError(std::string(what) + " must be positive, got " + std::to_string(v));
}

}  // namespace

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::LES: return "LES";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
    }
    return "?";
}

std::string_view to_string(StabilityMethod m) {
    switch (m) {
        case StabilityMethod::FactoredPolynomial: return "factored-polynomial";
        case StabilityMethod::RouthHurwitz: return "routh-hurwitz";
        case StabilityMethod::Eigenvalues: return "eigenvalues";
    }
    return "?";
}

char letter(Stability s) {
    switch (s) {
        case Stability::LES: return 'S';
        case Stability::Unstable: return 'U';
        case Stability::Marginal: return 'M';
    }
    return '?';
}

double StabilityReport::coefficient(std::string_view name) const {
    for (const auto& c : coefficients) {
        if (c.name == name) return c.value;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

Matrix3 jacobian(const State& state, const OperatingPoint& op, const Model& model) {
    const auto [S, x1, x2] = state;
    const double D = op.D;
    const double D1 = model.removal(Species::first, D);
    const double D2 = model.removal(Species::second, D);
    const double f1 = model.rate(Species::first, S, x2);
    const double f2 = model.rate(Species::second, S, x1);
    const auto p1 = model.growth->partials(Species::first, S, x2);
    const auto p2 = model.growth->partials(Species::second, S, x1);
    const double E = p1.dS;
    const double F = p2.dS;
    const double G = -p1.dX;
    const double H = -p2.dX;
    return {{{-D - x1 * E - x2 * F, -f1 + x2 * H, x1 * G - f2},
             {x1 * E, f1 - D1, -x1 * G},
             {x2 * F, -x2 * H, f2 - D2}}};
}

Eigenvalues eigenvalues(const Matrix3& m) {
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (!std::isfinite(m[r][c])) throw ParameterError("matrix has non-finite entries");
            a(r, c) = m[r][c];
        }
    }
    Eigen::EigenSolver<Eigen::Matrix3d> solver(a, false);
    if (solver.info() != Eigen::Success) throw ConsistencyError("eigenvalue iteration did not converge");
    Eigenvalues ev;
    for (int k = 0; k < 3; ++k) ev[k] = solver.eigenvalues()[k];
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return ev;
}

Stability classify_eigenvalues(const Eigenvalues& ev) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& v : ev) top = std::max(top, v.real());
    return from_margin(top);
}

std::array<double, 3> characteristic_coefficients(const Matrix3& m) {
    const double trace = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                          m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {-trace, minors, -det};
}

StabilityReport classify(const SteadyState& ss, const OperatingPoint& op, const Model& model) {
    if (!(ss.residual <= kResidualTol)) throw ParameterError("state is not a steady state within tolerance");

    const double D = op.D;
    const double D1 = model.removal(Species::first, D);
    const double D2 = model.removal(Species::second, D);
    const auto [S, x1, x2] = ss.state;

    StabilityReport rep;
    switch (ss.kind) {
        case EquilibriumKind::E0: {
            rep.method = StabilityMethod::FactoredPolynomial;
            const auto lam1 = break_even(Species::first, D, model);
            const auto lam2 = break_even(Species::second, D, model);
            // LES iff S_in < min(lambda_1, lambda_2); an undefined lambda never binds
            double margin = -std::numeric_limits<double>::infinity();
            if (lam1) margin = std::max(margin, op.S_in - *lam1);
            if (lam2) margin = std::max(margin, op.S_in - *lam2);
            rep.analytic = from_margin(margin);
            rep.coefficients = {{"e_S", -D},
                                {"e_1", model.rate(Species::first, op.S_in, 0.0) - D1},
                                {"e_2", model.rate(Species::second, op.S_in, 0.0) - D2}};
            break;
        }
        case EquilibriumKind::E1: {
            rep.method = StabilityMethod::FactoredPolynomial;
            const double E = model.growth->d_substrate(Species::first, S, 0.0);
            const double excess = op.S_in - S;
            const double q1 = D * (1.0 + E * excess / D1);
            const double q2 = D * E * excess;
            require_positive(q1, "q1");
            require_positive(q2, "q2");
            const double transverse = model.rate(Species::second, S, x1) - D2;
            rep.analytic = from_margin(transverse);
            rep.coefficients = {{"transverse", transverse}, {"q1", q1}, {"q2", q2}};
            break;
        }
        case EquilibriumKind::E2: {
            rep.method = StabilityMethod::FactoredPolynomial;
            const double F = model.growth->d_substrate(Species::second, S, 0.0);
            const double excess = op.S_in - S;
            const double r1 = D * (1.0 + F * excess / D2);
            const double r2 = D * F * excess;
            require_positive(r1, "r1");
            require_positive(r2, "r2");
            const double transverse = model.rate(Species::first, S, x2) - D1;
            rep.analytic = from_margin(transverse);
            rep.coefficients = {{"transverse", transverse}, {"r1", r1}, {"r2", r2}};
            break;
        }
        case EquilibriumKind::Estar: {
            rep.method = StabilityMethod::RouthHurwitz;
            const auto p1 = model.growth->partials(Species::first, S, x2);
            const auto p2 = model.growth->partials(Species::second, S, x1);
            const double E = p1.dS, F = p2.dS, G = -p1.dX, H = -p2.dX;
            const double c1 = D + E * x1 + F * x2;
            const double c2 = D1 * E * x1 + D2 * F * x2 - (G * H + F * G + E * H) * x1 * x2;
            const double c3 = -(D * G * H + D1 * F * G + D2 * E * H) * x1 * x2;
            if (!(c3 < 0.0)) throw ConsistencyError("c3 must be negative at a coexistence steady state");
            rep.analytic = Stability::Unstable;
            rep.coefficients = {{"c1", c1}, {"c2", c2}, {"c3", c3}};
            break;
        }
    }

    rep.eigenvalues = eigenvalues(jacobian(ss.state, op, model));
    rep.numeric = classify_eigenvalues(rep.eigenvalues);

    if (rep.analytic == Stability::Marginal || rep.numeric == Stability::Marginal) {
        rep.classification = Stability::Marginal;
    } else if (rep.analytic != rep.numeric) {
        throw ConsistencyError(std::string(to_string(ss.kind)) + ": analytic stability " +
                               std::string(to_string(rep.analytic)) + " disagrees with eigenvalues (" +
                               std::string(to_string(rep.numeric)) + ")");
    } else {
        rep.classification = rep.analytic;
    }
    return rep;
}

}  // namespace chemostat
