#include "chemostat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chemostat/errors.hpp"
#include "chemostat/format.hpp"

namespace chemostat {

namespace {

std::string num(double v) {
    // pixel coordinates need no more than 0.01 px resolution
    return format_number(std::round(v * 100.0) / 100.0);
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0}) {
        if (f * mag >= raw) return f * mag;
    }
    return 10.0 * mag;
}

std::string_view presence_stroke(Stability s) {
    switch (s) {
        case Stability::LES: return "red";
        case Stability::Unstable: return "blue";
        case Stability::Marginal: return "gray";
    }
    return "black";
}

}  // namespace

SvgPlot::SvgPlot(Interval x_range, Interval y_range, double width, double height)
    : xr_(x_range), yr_(y_range), width_(width), height_(height) {
    if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo)) throw ParameterError("empty plot window");
}

double SvgPlot::px(double x) const { return left_ + (x - xr_.lo) / (xr_.hi - xr_.lo) * (width_ - left_ - right_); }

double SvgPlot::py(double y) const { return height_ - bottom_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * (height_ - top_ - bottom_); }

void SvgPlot::cell(double x0, double x1, double y0, double y1, std::string_view fill) {
    const double a = px(x0), b = px(x1), c = py(y1), d = py(y0);
    clipped_ << "<rect x=\"" << num(a) << "\" y=\"" << num(c) << "\" width=\"" << num(b - a) << "\" height=\""
             << num(d - c) << "\" fill=\"" << fill << "\" stroke=\"" << fill << "\" stroke-width=\"0.8\"/>\n";
}

void SvgPlot::polyline(std::span<const std::pair<double, double>> pts, std::string_view stroke, double stroke_width,
                       bool dashed) {
    if (pts.size() < 2) return;
    clipped_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(stroke_width) << '"';
    if (dashed) clipped_ << " stroke-dasharray=\"6 4\"";
    clipped_ << " points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k) clipped_ << ' ';
        clipped_ << num(px(pts[k].first)) << ',' << num(py(pts[k].second));
    }
    clipped_ << "\"/>\n";
}

void SvgPlot::circle(double x, double y, double radius_px, std::string_view fill, std::string_view stroke) {
    overlay_ << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"" << num(radius_px)
             << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void SvgPlot::diamond(double x, double y, double half_px, std::string_view fill) {
    const double cx = px(x), cy = py(y);
    overlay_ << "<polygon fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"0.5\" points=\"" << num(cx) << ','
             << num(cy - half_px) << ' ' << num(cx + half_px) << ',' << num(cy) << ' ' << num(cx) << ','
             << num(cy + half_px) << ' ' << num(cx - half_px) << ',' << num(cy) << "\"/>\n";
}

void SvgPlot::text(double x, double y, std::string_view s, double dx_px, double dy_px) {
    overlay_ << "<text x=\"" << num(px(x) + dx_px) << "\" y=\"" << num(py(y) + dy_px)
             << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s) << "</text>\n";
}

void SvgPlot::axes(std::string_view x_label, std::string_view y_label, std::string_view title) {
    const double x0 = px(xr_.lo), x1 = px(xr_.hi), y0 = py(yr_.lo), y1 = py(yr_.hi);
    overlay_ << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
             << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    overlay_ << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    const double xs = nice_step(xr_.hi - xr_.lo);
    for (double t = std::ceil(xr_.lo / xs) * xs; t <= xr_.hi + 1e-9 * xs; t += xs) {
        const double p = px(t);
        overlay_ << "<line x1=\"" << num(p) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(p) << "\" y2=\""
                 << num(y0 + 5) << "\" stroke=\"black\"/>"
                 << "<text x=\"" << num(p) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\">"
                 << format_number(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
    }
    const double ys = nice_step(yr_.hi - yr_.lo);
    for (double t = std::ceil(yr_.lo / ys) * ys; t <= yr_.hi + 1e-9 * ys; t += ys) {
        const double p = py(t);
        overlay_ << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(p) << "\" x2=\"" << num(x0) << "\" y2=\""
                 << num(p) << "\" stroke=\"black\"/>"
                 << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(p + 4) << "\" text-anchor=\"end\">"
                 << format_number(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
    }
    overlay_ << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(height_ - 12)
             << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n";
    overlay_ << "<text transform=\"translate(18," << num((y0 + y1) / 2)
             << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(y_label) << "</text>\n";
    if (!title.empty()) {
        overlay_ << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
                 << escape(title) << "</text>\n";
    }
    overlay_ << "</g>\n";
}

void SvgPlot::legend(std::span<const std::pair<std::string, std::string>> entries) {
    double y = top_ + 10.0;
    const double x = width_ - right_ + 12.0;
    overlay_ << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& [label, color] : entries) {
        overlay_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"14\" height=\"10\" fill=\""
                 << color << "\" stroke=\"black\" stroke-width=\"0.5\"/>"
                 << "<text x=\"" << num(x + 20) << "\" y=\"" << num(y) << "\">" << escape(label) << "</text>\n";
        y += 16.0;
    }
    overlay_ << "</g>\n";
}

void SvgPlot::write(std::ostream& os) const {
    const double x0 = px(xr_.lo), x1 = px(xr_.hi), y0 = py(yr_.lo), y1 = py(yr_.hi);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
       << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
       << "<defs><clipPath id=\"plot-area\"><rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\""
       << num(x1 - x0) << "\" height=\"" << num(y0 - y1) << "\"/></clipPath></defs>\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<g clip-path=\"url(#plot-area)\">\n"
       << clipped_.str() << "</g>\n"
       << overlay_.str() << "</svg>\n";
}

void render_operating_diagram(std::ostream& os, const DiagramGrid& grid, std::span<const Codim2Candidate> codim2) {
    SvgPlot plot(grid.S_range, grid.D_range);
    const double dS = (grid.S_range.hi - grid.S_range.lo) / double(grid.nS);
    const double dD = (grid.D_range.hi - grid.D_range.lo) / double(grid.nD);
    for (std::size_t j = 0; j < grid.nD; ++j) {
        // merge runs of equal labels along each row
        std::size_t start = 0;
        for (std::size_t i = 1; i <= grid.nS; ++i) {
            if (i == grid.nS || grid.at(i, j) != grid.at(start, j)) {
                const double s0 = grid.S_range.lo + dS * double(start);
                const double s1 = grid.S_range.lo + dS * double(i);
                const double d0 = grid.D_range.lo + dD * double(j);
                plot.cell(s0, s1, d0, d0 + dD, region_color(grid.at(start, j)));
                start = i;
            }
        }
    }
    for (const auto& curve : grid.curves) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : curve.samples) pts.emplace_back(p.S_in, p.D);
        plot.polyline(pts, curve_color(curve.id), 2.0);
    }
    for (const auto& c : codim2) {
        plot.circle(c.S_in, c.D, 4.0, "black", "white");
        std::string label = "(" + format_number(c.S_in, 6) + ", " + format_number(c.D, 6) + ")";
        plot.text(c.S_in, c.D, label);
    }
    plot.axes("S_in", "D", "Operating diagram");
    std::vector<std::pair<std::string, std::string>> legend;
    for (Region r : {Region::J0, Region::J1, Region::J2, Region::J3, Region::J4, Region::J5}) {
        legend.emplace_back(std::string(to_string(r)), std::string(region_color(r)));
    }
    for (CurveId id : kAllCurves) legend.emplace_back(std::string(to_string(id)), std::string(curve_color(id)));
    plot.legend(legend);
    plot.write(os);
}

void render_bifurcation(std::ostream& os, std::span<const BranchRow> rows, std::span<const BifurcationPoint> points,
                        double S_in, const Model& model, Interval D_range) {
    SvgPlot plot(D_range, {0.0, S_in * 1.05});
    for (EquilibriumKind kind : {EquilibriumKind::E0, EquilibriumKind::E1, EquilibriumKind::E2,
                                 EquilibriumKind::Estar}) {
        std::vector<std::pair<double, double>> run;
        std::optional<Stability> run_stability;
        const auto flush = [&] {
            if (run_stability) {
                plot.polyline(run, presence_stroke(*run_stability), 2.0, *run_stability != Stability::LES);
            }
            run.clear();
            run_stability.reset();
        };
        for (const auto& row : rows) {
            std::optional<std::pair<double, Stability>> here;
            for (std::size_t k = 0; k < row.states.size(); ++k) {
                if (row.states[k].kind == kind) here = {{row.states[k].state[0], row.reports[k].classification}};
            }
            if (!here) {
                flush();
                continue;
            }
            if (run_stability && *run_stability != here->second) {
                const auto last = run.back();
                flush();
                run.push_back(last);
            }
            run.emplace_back(row.D, here->first);
            run_stability = here->second;
        }
        flush();
    }
    for (const auto& b : points) {
        double S = S_in;
        if (b.curve == CurveId::U1c) S = break_even(Species::first, b.value, model).value_or(S_in);
        if (b.curve == CurveId::U2c) S = break_even(Species::second, b.value, model).value_or(S_in);
        plot.diamond(b.value, S, 6.0, "limegreen");
        plot.text(b.value, S, format_number(b.value, 6));
    }
    plot.axes("D", "S", "S_in = " + format_number(S_in));
    const std::pair<std::string, std::string> legend[] = {{"LES", "red"}, {"unstable", "blue"},
                                                          {"transcritical", "limegreen"}};
    plot.legend(legend);
    plot.write(os);
}

void render_phase_portrait(std::ostream& os, std::span<const Trajectory> trajectories,
                           std::span<const SteadyState> equilibria) {
    double x1_max = 0.0, x2_max = 0.0;
    for (const auto& t : trajectories) {
        for (const auto& s : t.states) {
            x1_max = std::max(x1_max, s[1]);
            x2_max = std::max(x2_max, s[2]);
        }
    }
    for (const auto& e : equilibria) {
        x1_max = std::max(x1_max, e.state[1]);
        x2_max = std::max(x2_max, e.state[2]);
    }
    SvgPlot plot({0.0, std::max(x1_max, 1e-6) * 1.08}, {0.0, std::max(x2_max, 1e-6) * 1.08});
    for (const auto& t : trajectories) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(t.states.size());
        for (const auto& s : t.states) pts.emplace_back(s[1], s[2]);
        const std::string_view color = !t.settled_on                              ? "gray"
                                       : *t.settled_on == EquilibriumKind::E1     ? "darkorange"
                                       : *t.settled_on == EquilibriumKind::E2     ? "teal"
                                                                                  : "black";
        plot.polyline(pts, color, 1.2);
        if (!t.states.empty()) plot.circle(t.states.front()[1], t.states.front()[2], 2.5, color, color);
    }
    for (const auto& e : equilibria) {
        plot.circle(e.state[1], e.state[2], 5.0, "black", "white");
        plot.text(e.state[1], e.state[2], std::string(to_string(e.kind)));
    }
    plot.axes("x1", "x2", "Trajectories (x1, x2)");
    const std::pair<std::string, std::string> legend[] = {{"to E1", "darkorange"}, {"to E2", "teal"},
                                                          {"unsettled", "gray"}};
    plot.legend(legend);
    plot.write(os);
}

}  // namespace chemostat
