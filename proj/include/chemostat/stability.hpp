#ifndef CHEMOSTAT_STABILITY_HPP
#define CHEMOSTAT_STABILITY_HPP

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "chemostat/equilibria.hpp"

namespace chemostat {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Eigenvalues = std::array<std::complex<double>, 3>;

enum class Stability { LES, Unstable, Marginal };
enum class StabilityMethod { FactoredPolynomial, RouthHurwitz, Eigenvalues };

std::string_view to_string(Stability s);
std::string_view to_string(StabilityMethod m);

/// One letter as used in existence/stability tables: S, U, or M (marginal).
char letter(Stability s);

struct NamedValue {
    std::string name;
    double value;
};

/**
 * @brief Local stability of one steady state.
 *
 * `classification` combines the analytic test with the eigenvalue
 * cross-check; `coefficients` holds the characteristic-polynomial data the
 * analytic test used:
 *   E0     eigenvalues of the triangular Jacobian (e_S, e_1, e_2)
 *   E1     transverse eigenvalue and the quadratic factor q1, q2
 *   E2     transverse eigenvalue and the quadratic factor r1, r2
 *   Estar  c1, c2, c3 of lambda^3 + c1 lambda^2 + c2 lambda + c3
 */
struct StabilityReport {
    Stability classification = Stability::Marginal;
    StabilityMethod method = StabilityMethod::Eigenvalues;
    Stability analytic = Stability::Marginal;
    Stability numeric = Stability::Marginal;
    Eigenvalues eigenvalues{};
    std::vector<NamedValue> coefficients;

    double coefficient(std::string_view name) const;
};

/// Jacobian of the vector field at `state`.
Matrix3 jacobian(const State& state, const OperatingPoint& op, const Model& model);

/// Eigenvalues sorted by real part, descending. Throws ParameterError on non-finite input.
Eigenvalues eigenvalues(const Matrix3& m);

/// Classification from real parts alone, using the 1e-9 marginal band.
Stability classify_eigenvalues(const Eigenvalues& ev);

/// Characteristic polynomial lambda^3 + c1 lambda^2 + c2 lambda + c3 of m, as {c1, c2, c3}.
std::array<double, 3> characteristic_coefficients(const Matrix3& m);

StabilityReport classify(const SteadyState& ss, const OperatingPoint& op, const Model& model);

}  // namespace chemostat

#endif  // CHEMOSTAT_STABILITY_HPP
