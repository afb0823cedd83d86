#pragma once

#include <string>
#include <utility>
#include <vector>

namespace depsgd::harness {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct SvgAxes {
    bool log_x = false;
    bool log_y = false;
    std::string x_label = "t";
    std::string y_label = "";
};

/// Standalone line plot: one polyline per series plus a text legend.
/// Log axes reject non-positive values with a message suggesting linear.
std::string render_svg(const std::vector<SvgSeries>& series, const SvgAxes& axes);

void emit_svg(const std::vector<SvgSeries>& series, const SvgAxes& axes,
              const std::string& path);

}  // namespace depsgd::harness
