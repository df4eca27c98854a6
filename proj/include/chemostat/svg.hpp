#ifndef CHEMOSTAT_SVG_HPP
#define CHEMOSTAT_SVG_HPP

#include <iosfwd>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chemostat/diagram.hpp"
#include "chemostat/dynamics.hpp"

namespace chemostat {

/**
 * @brief Minimal self-contained SVG plot: one rectangular data window with axes.
 *
 * Drawing calls take data coordinates; the plot area maps exactly onto
 * x_range x y_range and everything drawn is clipped to it.
 */
class SvgPlot {
  public:
    SvgPlot(Interval x_range, Interval y_range, double width = 720.0, double height = 540.0);

    void cell(double x0, double x1, double y0, double y1, std::string_view fill);
    void polyline(std::span<const std::pair<double, double>> pts, std::string_view stroke, double stroke_width = 1.5,
                  bool dashed = false);
    void circle(double x, double y, double radius_px, std::string_view fill, std::string_view stroke = "black");
    void diamond(double x, double y, double half_px, std::string_view fill);
    void text(double x, double y, std::string_view s, double dx_px = 6.0, double dy_px = -6.0);

    void axes(std::string_view x_label, std::string_view y_label, std::string_view title = {});
    void legend(std::span<const std::pair<std::string, std::string>> entries);

    void write(std::ostream& os) const;

  private:
    double px(double x) const;
    double py(double y) const;

    Interval xr_, yr_;
    double width_, height_;
    double left_ = 70.0, right_ = 150.0, top_ = 40.0, bottom_ = 55.0;
    std::ostringstream clipped_;
    std::ostringstream overlay_;
};

/// Region fills, the four boundary curves, and codim-2 markers.
void render_operating_diagram(std::ostream& os, const DiagramGrid& grid, std::span<const Codim2Candidate> codim2);

/// S-component of each steady state against D; LES solid red, unstable dashed blue, transcritical points as green diamonds.
void render_bifurcation(std::ostream& os, std::span<const BranchRow> rows, std::span<const BifurcationPoint> points,
                        double S_in, const Model& model, Interval D_range);

/// (x1, x2) projection of trajectories with the steady states marked.
void render_phase_portrait(std::ostream& os, std::span<const Trajectory> trajectories,
                           std::span<const SteadyState> equilibria);

}  // namespace chemostat

#endif  // CHEMOSTAT_SVG_HPP
