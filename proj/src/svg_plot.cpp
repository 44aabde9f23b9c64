#include "smellpred/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace smellpred {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 25.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string num(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return std::string(buffer);
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string scatter_plot_svg(const std::vector<std::pair<double, double>>& points,
                             std::string_view x_label, std::string_view y_label,
                             std::string_view title) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (!points.empty()) {
        x_min = x_max = points.front().first;
        y_min = y_max = points.front().second;
        for (const auto& [x, y] : points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_min == x_max) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if (y_min == y_max) {
        y_min -= 1.0;
        y_max += 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto sy = [&](double y) {
        return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg += "  <text x=\"" + num(kWidth / 2) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
               escape(title) + "</text>\n";
    }

    // axes
    svg += "  <line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(kMarginTop + plot_h) +
           "\" x2=\"" + num(kMarginLeft + plot_w) + "\" y2=\"" + num(kMarginTop + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(kMarginTop) + "\" x2=\"" +
           num(kMarginLeft) + "\" y2=\"" + num(kMarginTop + plot_h) + "\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
        const double fx = x_min + (x_max - x_min) * t / kTicks;
        const double px = sx(fx);
        svg += "  <line x1=\"" + num(px) + "\" y1=\"" + num(kMarginTop + plot_h) + "\" x2=\"" +
               num(px) + "\" y2=\"" + num(kMarginTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
        svg += "  <text x=\"" + num(px) + "\" y=\"" + num(kMarginTop + plot_h + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(fx) +
               "</text>\n";
        const double fy = y_min + (y_max - y_min) * t / kTicks;
        const double py = sy(fy);
        svg += "  <line x1=\"" + num(kMarginLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
               num(kMarginLeft) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
        svg += "  <text x=\"" + num(kMarginLeft - 9) + "\" y=\"" + num(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(fy) +
               "</text>\n";
    }

    svg += "  <text x=\"" + num(kMarginLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(x_label) + "</text>\n";
    svg += "  <text x=\"18\" y=\"" + num(kMarginTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           num(kMarginTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

    for (const auto& [x, y] : points) {
        svg += "  <circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) +
               "\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace smellpred
