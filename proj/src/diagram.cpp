#include "chemostat/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "chemostat/format.hpp"
#include "chemostat/parallel.hpp"
#include "chemostat/roots.hpp"

namespace chemostat {

namespace {

constexpr double kRefineTol = 1e-10;

std::vector<double> log_grid(Interval r, std::size_t n) {
    if (!(r.lo > 0.0 && r.hi > r.lo)) throw ParameterError("log-spaced range needs 0 < lo < hi");
    if (n < 2) throw ParameterError("grid needs at least 2 points");
    std::vector<double> g(n);
    const double ratio = std::log(r.hi / r.lo);
    for (std::size_t k = 0; k < n; ++k) g[k] = r.lo * std::exp(ratio * double(k) / double(n - 1));
    g.front() = r.lo;
    g.back() = r.hi;
    return g;
}

Presence presence_of(Stability s) {
    switch (s) {
        case Stability::LES: return Presence::Stable;
        case Stability::Unstable: return Presence::Unstable;
        case Stability::Marginal: return Presence::Marginal;
    }
    return Presence::Marginal;
}

std::size_t slot(EquilibriumKind k) { return static_cast<std::size_t>(k); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Refines a sign change of `g` on [a, b]; g may be undefined (nullopt) in places.
template <class G>
std::optional<double> refine(G&& g, double a, double b) {
    bool undefined = false;
    const auto scalar = [&](double x) {
        const auto v = g(x);
        if (!v) {
            undefined = true;
            return 0.0;
        }
        return *v;
    };
    const auto root = roots::bisect(scalar, a, b, kRefineTol, 0);
    if (undefined || !root) return std::nullopt;
    return root;
}

// S_in where the indicator of `id` changes sign at fixed D.
std::optional<double> solve_complement(CurveId id, double D, const Model& model, std::optional<double> hint,
                                       const TraceOptions& opts) {
    const auto lam1 = break_even(Species::first, D, model);
    const auto lam2 = break_even(Species::second, D, model);
    if (!lam1 || !lam2) return std::nullopt;
    const double S_min = std::max(*lam1, *lam2);
    if (!(S_min < opts.S_in_max)) return std::nullopt;

    const auto r = [&](double S) -> double {
        const auto v = curve_residual(id, {S, D}, model);
        return v ? *v : std::numeric_limits<double>::quiet_NaN();
    };
    const double tol = roots::kArgTol * 0.1;
    const auto solve = [&](double lo, double hi) -> std::optional<double> {
        const double rlo = r(lo), rhi = r(hi);
        if (!(std::isfinite(rlo) && std::isfinite(rhi))) return std::nullopt;
        if (sign_of(rlo) * sign_of(rhi) > 0) return std::nullopt;
        return roots::bisect(r, lo, hi, tol * std::max(1.0, hi));
    };

    if (hint && *hint > S_min) {
        for (double delta : {1e-3, 1e-2, 1e-1, 0.5}) {
            const double lo = std::max(S_min + (*hint - S_min) * 1e-6, *hint * (1.0 - delta));
            const double hi = std::min(opts.S_in_max, *hint * (1.0 + delta));
            if (lo < hi) {
                if (auto s = solve(lo, hi)) return s;
            }
        }
    }

    // fallback: scan offsets above S_min geometrically
    const double u_lo = 1e-12 * (1.0 + S_min);
    const double u_hi = opts.S_in_max - S_min;
    if (!(u_hi > u_lo)) return std::nullopt;
    const std::size_t n = std::max<std::size_t>(opts.scan_points, 2);
    double prev_S = S_min + u_lo;
    double prev_r = r(prev_S);
    for (std::size_t k = 1; k < n; ++k) {
        const double S = S_min + u_lo * std::pow(u_hi / u_lo, double(k) / double(n - 1));
        const double rk = r(S);
        if (std::isfinite(prev_r) && std::isfinite(rk) && sign_of(prev_r) * sign_of(rk) <= 0) {
            if (auto s = solve(prev_S, S)) return s;
        }
        prev_S = S;
        prev_r = rk;
    }
    return std::nullopt;
}

// x-_i, taken as 0 when S_in sits on lambda_j within the tie band.
std::optional<double> x_bar_extended(Species i, const OperatingPoint& op, const Model& model, double lam_j) {
    if (auto xb = x_bar(i, op, model)) return xb;
    if (op.S_in >= lam_j - kTieBand) return 0.0;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Region r) {
    switch (r) {
        case Region::J0: return "J0";
        case Region::J1: return "J1";
        case Region::J2: return "J2";
        case Region::J3: return "J3";
        case Region::J4: return "J4";
        case Region::J5: return "J5";
        case Region::Boundary: return "Boundary";
    }
    return "?";
}

std::string_view region_color(Region r) {
    switch (r) {
        case Region::J0: return "#ffffff";
        case Region::J1:
        case Region::J5: return "#7fd67f";
        case Region::J2:
        case Region::J4: return "#f5b8d0";
        case Region::J3: return "#f7f06a";
        case Region::Boundary: return "#9a9a9a";
    }
    return "#000000";
}

std::string to_string(const Profile& p) {
    std::string out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k) out += ' ';
        switch (p[k]) {
            case Presence::Absent: out += '-'; break;
            case Presence::Stable: out += 'S'; break;
            case Presence::Unstable: out += 'U'; break;
            case Presence::Marginal: out += 'M'; break;
        }
    }
    return out;
}

Profile expected_profile(Region r) {
    constexpr auto A = Presence::Absent, S = Presence::Stable, U = Presence::Unstable;
    switch (r) {
        case Region::J0: return {S, A, A, A};
        case Region::J1: return {U, S, A, A};
        case Region::J2: return {U, A, S, A};
        case Region::J3: return {U, S, S, U};
        case Region::J4: return {U, U, S, A};
        case Region::J5: return {U, S, U, A};
        case Region::Boundary: break;
    }
    throw ParameterError("Boundary has no expected profile");
}

Profile compute_profile(const OperatingPoint& op, const Model& model) {
    Profile p{Presence::Absent, Presence::Absent, Presence::Absent, Presence::Absent};
    for (const auto& ss : find_steady_states(op, model)) {
        p[slot(ss.kind)] = presence_of(classify(ss, op, model).classification);
    }
    return p;
}

OperatingRegion classify_region(const OperatingPoint& op, const Model& model) {
    op.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double lam1 = break_even(Species::first, op.D, model).value_or(inf);
    const double lam2 = break_even(Species::second, op.D, model).value_or(inf);
    const double d1 = op.S_in - lam1;
    const double d2 = op.S_in - lam2;

    Region label = Region::Boundary;
    if (std::abs(d1) <= kTieBand || std::abs(d2) <= kTieBand) {
        label = Region::Boundary;
    } else if (d1 < 0.0 && d2 < 0.0) {
        label = Region::J0;
    } else if (d1 > 0.0 && d2 < 0.0) {
        label = Region::J1;
    } else if (d1 < 0.0 && d2 > 0.0) {
        label = Region::J2;
    } else {
        switch (classify_case(op, model).value) {
            case Case::Case1: label = Region::J5; break;
            case Case::Case2: label = Region::J3; break;
            case Case::Case3: label = Region::J4; break;
            case Case::Undefined:
            case Case::Degenerate: label = Region::Boundary; break;
        }
    }

    const Profile profile = compute_profile(op, model);
    if (label != Region::Boundary) {
        if (std::find(profile.begin(), profile.end(), Presence::Marginal) != profile.end()) {
            label = Region::Boundary;
        } else if (profile != expected_profile(label)) {
            throw ConsistencyError("region " + std::string(to_string(label)) + " at (S_in, D) = (" +
                                   format_number(op.S_in) + ", " + format_number(op.D) + ") expects profile " +
                                   to_string(expected_profile(label)) + " but steady states give " +
                                   to_string(profile));
        }
    }
    return {label, profile};
}

std::string_view to_string(CurveId id) {
    switch (id) {
        case CurveId::U1: return "U1";
        case CurveId::U2: return "U2";
        case CurveId::U1c: return "U1c";
        case CurveId::U2c: return "U2c";
    }
    return "?";
}

std::string_view curve_color(CurveId id) {
    switch (id) {
        case CurveId::U1: return "black";
        case CurveId::U2: return "blue";
        case CurveId::U1c: return "red";
        case CurveId::U2c: return "magenta";
    }
    return "black";
}

std::pair<EquilibriumKind, EquilibriumKind> collision(CurveId id) {
    switch (id) {
        case CurveId::U1: return {EquilibriumKind::E0, EquilibriumKind::E1};
        case CurveId::U2: return {EquilibriumKind::E0, EquilibriumKind::E2};
        case CurveId::U1c: return {EquilibriumKind::E1, EquilibriumKind::Estar};
        case CurveId::U2c: return {EquilibriumKind::E2, EquilibriumKind::Estar};
    }
    return {EquilibriumKind::E0, EquilibriumKind::E0};
}

std::string_view to_string(Codim2Kind k) {
    switch (k) {
        case Codim2Kind::CurveIntersection: return "curve-intersection";
        case Codim2Kind::NeutralSaddle: return "neutral-saddle";
        case Codim2Kind::ZeroDilutionLimit: return "zero-dilution-limit";
    }
    return "?";
}

std::optional<double> curve_residual(CurveId id, const OperatingPoint& op, const Model& model) {
    if (id == CurveId::U1 || id == CurveId::U2) {
        const Species i = id == CurveId::U1 ? Species::first : Species::second;
        const auto lam = break_even(i, op.D, model);
        if (!lam) return std::nullopt;
        return op.S_in - *lam;
    }
    const Species i = id == CurveId::U1c ? Species::first : Species::second;
    const auto lam_i = break_even(i, op.D, model);
    const auto lam_j = break_even(other(i), op.D, model);
    if (!lam_i || !lam_j || op.S_in < std::max(*lam_i, *lam_j) - kTieBand) return std::nullopt;
    const auto xb = x_bar_extended(i, op, model, *lam_j);
    if (!xb) return std::nullopt;
    const double xt = op.D * (op.S_in - *lam_i) / model.removal(i, op.D);
    return xt - *xb;
}

std::optional<double> solve_curve(CurveId id, double D, const Model& model, std::optional<double> hint,
                                  const TraceOptions& opts) {
    if (!(D > 0.0)) return std::nullopt;
    if (id == CurveId::U1 || id == CurveId::U2) {
        const auto lam = break_even(id == CurveId::U1 ? Species::first : Species::second, D, model);
        if (!lam || *lam > opts.S_in_max) return std::nullopt;
        return lam;
    }
    return solve_complement(id, D, model, hint, opts);
}

BoundaryCurve trace_boundary(CurveId id, Interval D_range, std::size_t n, const Model& model,
                             const TraceOptions& opts) {
    if (n < 2) throw ParameterError("trace_boundary needs at least 2 samples");
    if (!(D_range.hi > D_range.lo)) throw ParameterError("empty D range");

    BoundaryCurve curve{id, {}, {}};
    std::optional<double> hint;
    bool have_prev = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double D = D_range.lo + (D_range.hi - D_range.lo) * double(k) / double(n - 1);
        if (!(D > 0.0)) continue;
        auto S = solve_curve(id, D, model, hint, opts);
        if (S) {
            const auto res = curve_residual(id, {*S, D}, model);
            if (!res || std::abs(*res) > kResidualTol) S.reset();
        }
        if (S) {
            curve.samples.push_back({*S, D});
            if (!have_prev && k > 0) curve.endpoints.push_back(curve.samples.back());
            hint = S;
            have_prev = true;
        } else {
            if (have_prev) curve.endpoints.push_back(curve.samples.back());
            have_prev = false;
            hint.reset();
        }
    }
    return curve;
}

std::vector<BifurcationPoint> scan_dilution(double S_in, Interval D_range, const Model& model, std::size_t grid) {
    if (!(std::isfinite(S_in) && S_in > 0.0)) throw ParameterError("S_in must be positive");
    const auto Ds = log_grid(D_range, grid);

    std::vector<BifurcationPoint> out;
    for (CurveId id : kAllCurves) {
        const auto indicator = [&](double D) -> std::optional<double> {
            auto v = curve_residual(id, {S_in, D}, model);
            // an undefined break-even concentration behaves as +infinity
            if (!v && (id == CurveId::U1 || id == CurveId::U2)) return -1.0;
            return v;
        };
        std::optional<double> prev = indicator(Ds[0]);
        for (std::size_t k = 1; k < Ds.size(); ++k) {
            const auto cur = indicator(Ds[k]);
            if (prev && cur && sign_of(*prev) * sign_of(*cur) <= 0 && !(*prev == 0.0 && k > 1)) {
                if (const auto D = refine(indicator, Ds[k - 1], Ds[k])) {
                    const auto [a, b] = collision(id);
                    out.push_back({*D, id, a, b});
                }
            }
            prev = cur;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
    return out;
}

std::vector<BranchRow> branch_table(double S_in, std::span<const double> D_values, const Model& model) {
    std::vector<BranchRow> rows;
    rows.reserve(D_values.size());
    for (double D : D_values) {
        const OperatingPoint op{S_in, D};
        BranchRow row{D, {Presence::Absent, Presence::Absent, Presence::Absent, Presence::Absent}, {}, {}};
        row.states = find_steady_states(op, model);
        for (const auto& ss : row.states) {
            row.reports.push_back(classify(ss, op, model));
            row.profile[slot(ss.kind)] = presence_of(row.reports.back().classification);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DiagramGrid grid_diagram(Interval S_range, Interval D_range, std::size_t nS, std::size_t nD, const Model& model,
                         std::size_t curve_samples) {
    if (nS < 2 || nD < 2) throw ParameterError("grid resolution must be at least 2 per axis");
    if (!(S_range.hi > S_range.lo && S_range.lo >= 0.0)) throw ParameterError("invalid S_in range");
    if (!(D_range.hi > D_range.lo && D_range.lo >= 0.0)) throw ParameterError("invalid D range");

    DiagramGrid g{S_range, D_range, nS, nD, std::vector<Region>(nS * nD, Region::Boundary), {}};
    parallel_for(nS * nD, [&](std::size_t k) {
        const std::size_t i = k % nS;
        const std::size_t j = k / nS;
        g.labels[k] = classify_region({g.S_center(i), g.D_center(j)}, model).label;
    });

    if (curve_samples >= 2) {
        TraceOptions opts;
        opts.S_in_max = std::max(opts.S_in_max, S_range.hi);
        g.curves.resize(kAllCurves.size());
        parallel_for(kAllCurves.size(), [&](std::size_t c) {
            g.curves[c] = trace_boundary(kAllCurves[c], D_range, curve_samples, model, opts);
        });
    }
    return g;
}

std::vector<Codim2Candidate> codim2_candidates(const Model& model, Interval D_range, std::size_t grid) {
    if (!(D_range.hi > 0.0 && D_range.hi > D_range.lo)) throw ParameterError("invalid D range");
    const Interval positive{D_range.lo > 0.0 ? D_range.lo : D_range.hi * 1e-9, D_range.hi};
    const auto Ds = log_grid(positive, grid);

    std::vector<Codim2Candidate> found;
    const auto washout = [](double S) { return State{S, 0.0, 0.0}; };

    // on-curve state shared by the colliding steady states
    const auto state_on = [&](const std::vector<CurveId>& curves, double S_in, double D) -> State {
        for (CurveId id : curves) {
            if (id == CurveId::U1 || id == CurveId::U2) return washout(S_in);
        }
        for (const auto& ss : find_steady_states({S_in, D}, model)) {
            if (curves.front() == CurveId::U1c && ss.kind == EquilibriumKind::E1) return ss.state;
            if (curves.front() == CurveId::U2c && ss.kind == EquilibriumKind::E2) return ss.state;
        }
        return washout(S_in);
    };

    const auto curves_through = [&](double S_in, double D) {
        std::vector<CurveId> ids;
        for (CurveId id : kAllCurves) {
            const auto r = curve_residual(id, {S_in, D}, model);
            if (r && std::abs(*r) <= 1e-6) ids.push_back(id);
        }
        return ids;
    };

    // pairwise intersections, tracked through S_a(D) - S_b(D)
    const std::size_t pair_grid = std::min<std::size_t>(grid, 400);
    const auto Dp = log_grid(positive, pair_grid);
    TraceOptions opts;
    std::array<std::vector<std::optional<double>>, 4> S_on;
    for (std::size_t c = 0; c < kAllCurves.size(); ++c) {
        S_on[c].resize(Dp.size());
        std::optional<double> hint;
        for (std::size_t k = 0; k < Dp.size(); ++k) {
            S_on[c][k] = solve_curve(kAllCurves[c], Dp[k], model, hint, opts);
            hint = S_on[c][k];
        }
    }
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            for (std::size_t k = 1; k < Dp.size(); ++k) {
                const auto& pa = S_on[a][k - 1];
                const auto& pb = S_on[b][k - 1];
                const auto& ca = S_on[a][k];
                const auto& cb = S_on[b][k];
                if (!(pa && pb && ca && cb)) continue;
                if (sign_of(*pa - *pb) * sign_of(*ca - *cb) > 0) continue;
                const auto gap = [&](double D) -> std::optional<double> {
                    const auto sa = solve_curve(kAllCurves[a], D, model, *pa, opts);
                    const auto sb = solve_curve(kAllCurves[b], D, model, *pb, opts);
                    if (!sa || !sb) return std::nullopt;
                    return *sa - *sb;
                };
                if (const auto D = refine(gap, Dp[k - 1], Dp[k])) {
                    const double S = *solve_curve(kAllCurves[a], *D, model, *pa, opts);
                    auto ids = curves_through(S, *D);
                    if (ids.empty()) ids = {kAllCurves[a], kAllCurves[b]};
                    found.push_back({S, *D, ids, state_on(ids, S, *D), Codim2Kind::CurveIntersection});
                }
            }
        }
    }

    // neutral saddles of the washout state along U1 and U2
    for (Species i : {Species::first, Species::second}) {
        const Species j = other(i);
        const auto indicator = [&](double D) -> std::optional<double> {
            const auto lam = break_even(i, D, model);
            if (!lam) return std::nullopt;
            return model.rate(j, *lam, 0.0) - model.removal(j, D) - D;
        };
        std::optional<double> prev = indicator(Ds[0]);
        for (std::size_t k = 1; k < Ds.size(); ++k) {
            const auto cur = indicator(Ds[k]);
            if (prev && cur && sign_of(*prev) * sign_of(*cur) <= 0) {
                if (const auto D = refine(indicator, Ds[k - 1], Ds[k])) {
                    const double S = *break_even(i, *D, model);
                    found.push_back({S, *D, {i == Species::first ? CurveId::U1 : CurveId::U2}, washout(S),
                                     Codim2Kind::NeutralSaddle});
                }
            }
            prev = cur;
        }
    }

    if (D_range.lo <= 0.0) {
        const double eps = std::min(1e-12, D_range.hi * 1e-9);
        const auto lam1 = break_even(Species::first, eps, model);
        const auto lam2 = break_even(Species::second, eps, model);
        if (lam1 || lam2) {
            const bool first_binds = lam1 && (!lam2 || *lam1 <= *lam2);
            const double S = first_binds ? *lam1 : *lam2;
            found.push_back({S, 0.0, {first_binds ? CurveId::U1 : CurveId::U2}, washout(S),
                             Codim2Kind::ZeroDilutionLimit});
        }
    }

    // merge duplicates
    std::vector<Codim2Candidate> out;
    for (auto& c : found) {
        auto same = std::find_if(out.begin(), out.end(), [&](const Codim2Candidate& o) {
            return std::abs(o.S_in - c.S_in) <= 1e-6 && std::abs(o.D - c.D) <= 1e-6 && o.kind == c.kind;
        });
        if (same == out.end()) {
            out.push_back(std::move(c));
        } else {
            for (CurveId id : c.curves) {
                if (std::find(same->curves.begin(), same->curves.end(), id) == same->curves.end()) {
                    same->curves.push_back(id);
                }
            }
            std::sort(same->curves.begin(), same->curves.end());
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.D > b.D; });
    return out;
}

void write_grid_csv(std::ostream& os, const DiagramGrid& grid) {
    os << "S_in,D,region\n";
    for (std::size_t j = 0; j < grid.nD; ++j) {
        for (std::size_t i = 0; i < grid.nS; ++i) {
            os << format_number(grid.S_center(i)) << ',' << format_number(grid.D_center(j)) << ','
               << to_string(grid.at(i, j)) << '\n';
        }
    }
}

void write_curves_csv(std::ostream& os, std::span<const BoundaryCurve> curves) {
    os << "curve_id,S_in,D\n";
    for (const auto& c : curves) {
        for (const auto& p : c.samples) {
            os << to_string(c.id) << ',' << format_number(p.S_in) << ',' << format_number(p.D) << '\n';
        }
    }
}

}  // namespace chemostat
