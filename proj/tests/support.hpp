// Shared helpers for the test binaries: closed-form Monod references,
// a second growth law, and random parameter draws.

#ifndef CHEMOSTAT_TESTS_SUPPORT_HPP
#define CHEMOSTAT_TESTS_SUPPORT_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <random>

#include "chemostat/equilibria.hpp"
#include "chemostat/growth.hpp"

namespace support {

using chemostat::BioParams;
using chemostat::Model;
using chemostat::OperatingPoint;
using chemostat::Species;
using chemostat::State;

inline std::size_t idx(Species s) { return chemostat::index(s); }

inline double removal(Species i, double D, const BioParams& p) { return p.alpha[idx(i)] * D + p.death[idx(i)]; }

// For unit yields the Monod pair makes every defining equation linear in the
// unknown, so each reference below is an explicit formula.

inline std::optional<double> lambda(Species i, double D, const BioParams& p) {
    const double Di = removal(i, D, p);
    const double m = p.m[idx(i)];
    if (!(Di < m)) return std::nullopt;
    return p.K[idx(i)] * Di / (m - Di);
}

inline std::optional<double> x_tilde(Species i, const OperatingPoint& op, const BioParams& p) {
    const auto l = lambda(i, op.D, p);
    if (!l) return std::nullopt;
    return op.D * (op.S_in - *l) / removal(i, op.D, p);
}

inline std::optional<double> x_bar(Species i, const OperatingPoint& op, const BioParams& p) {
    const Species j = chemostat::other(i);
    const double Di = removal(i, op.D, p), Dj = removal(j, op.D, p);
    const double mj = p.m[idx(j)], Kj = p.K[idx(j)], bj = p.beta[idx(j)];
    if (!(Dj < mj)) return std::nullopt;
    const double num = (mj - Dj) * op.S_in - Dj * Kj;
    if (num < 0.0) return std::nullopt;
    return num / ((mj - Dj) * Di / op.D + Dj * bj);
}

/// x2 on the F1 nullcline at x1: f1(S_in - D1 x1/D - D2 x2/D, x2) = D1.
inline double F1(double x1, const OperatingPoint& op, const BioParams& p) {
    const double D = op.D, D1 = removal(Species::first, D, p), D2 = removal(Species::second, D, p);
    const double c = p.m[0] - D1;
    return (c * (op.S_in - D1 * x1 / D) - D1 * p.K[0]) / (c * D2 / D + D1 * p.beta[0]);
}

/// x2 on the F2 nullcline at x1: f2(S_in - D1 x1/D - D2 x2/D, x1) = D2.
inline double F2(double x1, const OperatingPoint& op, const BioParams& p) {
    const double D = op.D, D1 = removal(Species::first, D, p), D2 = removal(Species::second, D, p);
    const double c = p.m[1] - D2;
    return (c * (op.S_in - D1 * x1 / D) - D2 * p.K[1] - D2 * p.beta[1] * x1) / (c * D2 / D);
}

/// Intersection of the two straight nullclines.
inline State coexistence(const OperatingPoint& op, const BioParams& p) {
    const double a1 = F1(0.0, op, p), b1 = F1(1.0, op, p) - a1;
    const double a2 = F2(0.0, op, p), b2 = F2(1.0, op, p) - a2;
    const double x1 = (a2 - a1) / (b1 - b2);
    const double x2 = a1 + b1 * x1;
    const double D1 = removal(Species::first, op.D, p), D2 = removal(Species::second, op.D, p);
    return {op.S_in - D1 * x1 / op.D - D2 * x2 / op.D, x1, x2};
}

/// f_i(S, x) = m_i (1 - exp(-S / K_i)) / (1 + beta_i x); partials come from the base-class differences.
class ExponentialInhibition final : public chemostat::GrowthModel {
  public:
    explicit ExponentialInhibition(const BioParams& p) : p_(p) {}

    double rate(Species i, double S, double x) const override {
        const auto k = idx(i);
        return p_.m[k] * (1.0 - std::exp(-S / p_.K[k])) / (1.0 + p_.beta[k] * x);
    }
    double sup_rate(Species i) const override { return p_.m[idx(i)]; }

    double exact_dS(Species i, double S, double x) const {
        const auto k = idx(i);
        return p_.m[k] * std::exp(-S / p_.K[k]) / p_.K[k] / (1.0 + p_.beta[k] * x);
    }
    double exact_dX(Species i, double S, double x) const {
        const auto k = idx(i);
        const double den = 1.0 + p_.beta[k] * x;
        return -p_.m[k] * (1.0 - std::exp(-S / p_.K[k])) * p_.beta[k] / (den * den);
    }

  private:
    BioParams p_;
};

inline Model exponential_model(const BioParams& p) {
    return Model{std::make_shared<ExponentialInhibition>(p), p};
}

inline BioParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> m(0.5, 5.0), K(0.1, 3.0), beta(0.01, 3.0), alpha(0.0, 1.0), a(0.0, 1.0);
    BioParams p;
    for (int k = 0; k < 2; ++k) {
        p.m[k] = m(rng);
        p.K[k] = K(rng);
        p.beta[k] = beta(rng);
        p.alpha[k] = alpha(rng);
        p.death[k] = a(rng);
        if (p.alpha[k] == 0.0 && p.death[k] == 0.0) p.death[k] = 0.1;
    }
    return p;
}

inline OperatingPoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> S(0.1, 5.0), D(0.01, 3.0);
    return {S(rng), D(rng)};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace support

#endif  // CHEMOSTAT_TESTS_SUPPORT_HPP
