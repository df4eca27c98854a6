#ifndef CHEMOSTAT_ROOTS_HPP
#define CHEMOSTAT_ROOTS_HPP

#include <cmath>
#include <optional>
#include <utility>

namespace chemostat::roots {

/// Default bracket width at which bisection stops.
inline constexpr double kArgTol = 1e-12;

/**
 * @brief Bracketed bisection followed by a few bracket-preserving secant steps.
 *
 * f(lo) and f(hi) must differ in sign (a zero at either end is returned
 * directly). Returns std::nullopt when the interval does not bracket a root.
 * Every map solved in this library is monotone on its bracket, so the
 * iteration converges unconditionally.
 */
template <class F>
std::optional<double> bisect(F&& f, double lo, double hi, double tol = kArgTol, int polish_steps = 3) {
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(std::isfinite(flo) && std::isfinite(fhi))) return std::nullopt;
    if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;

    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    // secant polish, kept inside the bracket
    for (int k = 0; k < polish_steps; ++k) {
        if (fhi == flo) break;
        const double x = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(x > lo && x < hi)) break;
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

}  // namespace chemostat::roots

#endif  // CHEMOSTAT_ROOTS_HPP
