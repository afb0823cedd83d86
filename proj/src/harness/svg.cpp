#include "harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "harness/csv.hpp"

namespace depsgd::harness {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 690.0, kTop = 30.0, kBottom = 430.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const SvgAxes& axes) {
    if (series.empty()) throw std::invalid_argument("render_svg: no series");
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    std::size_t total = 0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (axes.log_x && x <= 0.0)
                throw std::invalid_argument("render_svg: non-positive x on log axis; use a linear axis");
            if (axes.log_y && y <= 0.0)
                throw std::invalid_argument("render_svg: non-positive y on log axis; use a linear axis");
            const double px = axes.log_x ? std::log10(x) : x;
            const double py = axes.log_y ? std::log10(y) : y;
            x_min = std::min(x_min, px);
            x_max = std::max(x_max, px);
            y_min = std::min(y_min, py);
            y_max = std::max(y_max, py);
            ++total;
        }
    }
    if (total == 0) throw std::invalid_argument("render_svg: empty data");
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;

    auto sx = [&](double x) {
        const double px = axes.log_x ? std::log10(x) : x;
        return kLeft + (px - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    auto sy = [&](double y) {
        const double py = axes.log_y ? std::log10(y) : y;
        return kBottom - (py - y_min) / (y_max - y_min) * (kBottom - kTop);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";

    // ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        const double vx = axes.log_x ? std::pow(10.0, fx) : fx;
        const double vy = axes.log_y ? std::pow(10.0, fy) : fy;
        const double px = kLeft + (kRight - kLeft) * i / 4.0;
        const double py = kBottom - (kBottom - kTop) * i / 4.0;
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(kBottom + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(kBottom + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(vx) + "</text>\n";
        svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(py) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + fmt(vy) + "</text>\n";
    }
    svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kHeight - 10) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + axes.x_label +
           (axes.log_x ? " (log)" : "") + "</text>\n";
    svg += "<text x=\"15\" y=\"" + fmt((kTop + kBottom) / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
           fmt((kTop + kBottom) / 2) + ")\">" + axes.y_label + (axes.log_y ? " (log)" : "") +
           "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const auto& [x, y] : series[s].points) {
            pts += fmt(sx(x)) + "," + fmt(sy(y)) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + fmt(kRight - 150) + "\" y=\"" + fmt(kTop + 16 + 16 * static_cast<double>(s)) +
               "\" font-size=\"12\" fill=\"" + color + "\">" + series[s].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg(const std::vector<SvgSeries>& series, const SvgAxes& axes,
              const std::string& path) {
    write_file(path, render_svg(series, axes));
}

}  // namespace depsgd::harness
