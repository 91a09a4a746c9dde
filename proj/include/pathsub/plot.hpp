// Self-contained SVG figure of a 4-d orbit: two panels showing the
// projections onto (x1, x2) and (x3, x4), the orbit in black and the
// projection of the critical set [-b, b] x {0} in red.
#pragma once

#include "pathsub/dynamics.hpp"

#include <ostream>
#include <string>

namespace pathsub {

namespace detail {

inline void svg_panel(std::ostream& os, const Trajectory& traj, std::size_t ix, std::size_t iy, double b,
                      double offset_x, const std::string& label_x, const std::string& label_y)
{
    constexpr double kPanel = 300;
    const double extent = 1.25 * b;
    const double s = kPanel / (2 * extent);
    const std::string S = format_double(s);
    // Data coordinates inside the group; y axis flipped.
    os << "  <g transform=\"translate(" << format_double(offset_x + kPanel / 2) << ","
       << format_double(20 + kPanel / 2) << ") scale(" << S << ",-" << S << ")\">\n";
    os << "    <rect class=\"domain\" x=\"" << format_double(-b) << "\" y=\"" << format_double(-b) << "\" width=\""
       << format_double(2 * b) << "\" height=\"" << format_double(2 * b)
       << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\" vector-effect=\"non-scaling-stroke\"/>\n";
    os << "    <line class=\"axis\" x1=\"" << format_double(-extent) << "\" y1=\"0\" x2=\"" << format_double(extent)
       << "\" y2=\"0\" stroke=\"#dddddd\" vector-effect=\"non-scaling-stroke\"/>\n";
    os << "    <line class=\"axis\" x1=\"0\" y1=\"" << format_double(-extent) << "\" x2=\"0\" y2=\""
       << format_double(extent) << "\" stroke=\"#dddddd\" vector-effect=\"non-scaling-stroke\"/>\n";
    os << "    <line class=\"critical\" x1=\"" << format_double(-b) << "\" y1=\"0\" x2=\"" << format_double(b)
       << "\" y2=\"0\" stroke=\"red\" stroke-width=\"3\" vector-effect=\"non-scaling-stroke\"/>\n";
    os << "    <polyline class=\"orbit\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
          "vector-effect=\"non-scaling-stroke\" points=\"";
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (n) os << ' ';
        os << format_double(traj.points[n][ix]) << ',' << format_double(traj.points[n][iy]);
    }
    os << "\"/>\n  </g>\n";
    os << "  <text x=\"" << format_double(offset_x + kPanel / 2) << "\" y=\"" << format_double(kPanel + 40)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">(" << label_x << ", " << label_y
       << ")</text>\n";
}

} // namespace detail

inline void write_orbit_svg(std::ostream& os, const Trajectory& traj, double b)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" viewBox=\"0 0 640 360\">\n";
    os << "  <rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
    detail::svg_panel(os, traj, 0, 1, b, 10, "x1", "x2");
    detail::svg_panel(os, traj, 2, 3, b, 330, "x3", "x4");
    os << "</svg>\n";
}

} // namespace pathsub
