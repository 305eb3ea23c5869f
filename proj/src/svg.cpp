#include "gpustress/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace gpustress {

namespace {

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

void line(std::string& out, double x1, double y1, double x2, double y2,
          const char* cls) {
    out += "  <line class=\"" + std::string(cls) + "\" x1=\"" + num(x1) + "\" y1=\"" +
           num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) + "\"/>\n";
}

void text(std::string& out, double x, double y, const std::string& content,
          const char* anchor = "middle", const char* cls = "label") {
    out += "  <text class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" +
           num(y) + "\" text-anchor=\"" + anchor + "\">" + content + "</text>\n";
}

std::string format_decade(int exponent) {
    char buffer[32];
    if (exponent >= 0 && exponent <= 5) {
        std::snprintf(buffer, sizeof buffer, "%.0f", std::pow(10.0, exponent));
    } else if (exponent < 0 && exponent >= -3) {
        std::snprintf(buffer, sizeof buffer, "%.*f", -exponent, std::pow(10.0, exponent));
    } else {
        std::snprintf(buffer, sizeof buffer, "1e%d", exponent);
    }
    return buffer;
}

}  // namespace

std::string radar_svg(const std::vector<StressProfile>& ranked) {
    constexpr double kCx = 320.0, kCy = 330.0, kRadius = 240.0;
    constexpr int kWidth = 850, kHeight = 680;
    const std::size_t axes = std::size(kRadarAxes);

    auto point = [&](std::size_t axis, double value) {
        const double angle = -std::numbers::pi / 2.0 +
                             2.0 * std::numbers::pi * static_cast<double>(axis) /
                                 static_cast<double>(axes);
        return std::pair<double, double>{kCx + kRadius * value * std::cos(angle),
                                         kCy + kRadius * value * std::sin(angle)};
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
    out += "  <style>\n"
           "    text { font: 13px sans-serif; fill: #333; }\n"
           "    .title { font: bold 16px sans-serif; }\n"
           "    .grid { fill: none; stroke: #ccc; stroke-width: 1; }\n"
           "    .spoke { stroke: #bbb; stroke-width: 1; }\n"
           "    .workload { fill-opacity: 0.08; stroke-width: 2; }\n"
           "  </style>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(out, kCx, 28, "Normalized stress profile", "middle", "title");

    for (const double level : {0.25, 0.5, 0.75, 1.0}) {
        std::string points_attr;
        for (std::size_t a = 0; a < axes; ++a) {
            const auto [x, y] = point(a, level);
            points_attr += num(x) + "," + num(y) + " ";
        }
        out += "  <polygon class=\"grid\" points=\"" + points_attr + "\"/>\n";
    }
    for (std::size_t a = 0; a < axes; ++a) {
        const auto [x, y] = point(a, 1.0);
        line(out, kCx, kCy, x, y, "spoke");
        const auto [lx, ly] = point(a, 1.09);
        text(out, lx, ly + 4, std::string(kRadarAxes[a]));
    }

    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const StressProfile& p = ranked[i];
        const char* color = kPalette[i % kPaletteSize];
        std::string points_attr;
        for (std::size_t a = 0; a < axes; ++a) {
            const auto it = p.normalized_axes.find(kRadarAxes[a]);
            const double value = it != p.normalized_axes.end() ? it->second : 0.0;
            const auto [x, y] = point(a, value);
            points_attr += num(x) + "," + num(y) + " ";
        }
        out += "  <polygon class=\"workload\" data-name=\"" + p.name + "\" stroke=\"" +
               color + "\" fill=\"" + color + "\" points=\"" + points_attr + "\"/>\n";
    }

    const double legend_x = 655.0;
    double legend_y = 70.0;
    text(out, legend_x + 60, legend_y - 20, "rank", "middle");
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        out += "  <rect x=\"" + num(legend_x) + "\" y=\"" + num(legend_y - 10) +
               "\" width=\"14\" height=\"14\" fill=\"" + std::string(color) + "\"/>\n";
        text(out, legend_x + 22, legend_y + 2,
             std::to_string(ranked[i].rank) + ". " + ranked[i].name, "start");
        legend_y += 24.0;
    }

    out += "</svg>\n";
    return out;
}

std::string roofline_svg(const std::vector<NamedRooflinePoint>& points,
                         const HardwareSpec& hw, const ClusterBands& bands) {
    constexpr int kWidth = 760, kHeight = 560;
    constexpr double kLeft = 80.0, kRight = 700.0, kTop = 60.0, kBottom = 480.0;

    const double ridge = hw.peak_gflops / hw.peak_bandwidth_gbps;

    // Decade bounds covering every plottable point plus the ceilings.
    double min_x = ridge, max_x = ridge;
    double min_y = hw.peak_gflops, max_y = hw.peak_gflops;
    std::vector<const NamedRooflinePoint*> plottable;
    std::vector<const NamedRooflinePoint*> unplottable;
    for (const NamedRooflinePoint& p : points) {
        const double ai = p.point.arithmetic_intensity;
        const double tp = p.point.throughput_gflops;
        if (std::isfinite(ai) && ai > 0.0 && std::isfinite(tp) && tp > 0.0) {
            plottable.push_back(&p);
            min_x = std::min(min_x, ai);
            max_x = std::max(max_x, ai);
            min_y = std::min(min_y, tp);
            max_y = std::max(max_y, tp);
        } else {
            unplottable.push_back(&p);
        }
    }
    const int x_lo = static_cast<int>(std::floor(std::log10(min_x))) - 1;
    const int x_hi = static_cast<int>(std::ceil(std::log10(max_x)));
    const int y_lo = static_cast<int>(std::floor(std::log10(min_y))) - 1;
    const int y_hi = static_cast<int>(std::ceil(std::log10(max_y)));

    auto sx = [&](double ai) {
        return kLeft + (std::log10(ai) - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
    };
    auto sy = [&](double tp) {
        return kBottom - (std::log10(tp) - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
    out += "  <style>\n"
           "    text { font: 12px sans-serif; fill: #333; }\n"
           "    .title { font: bold 16px sans-serif; }\n"
           "    .grid { stroke: #e0e0e0; stroke-width: 1; }\n"
           "    .axis { stroke: #333; stroke-width: 1; }\n"
           "    .roof { stroke: #222; stroke-width: 2; fill: none; }\n"
           "    .ridge { stroke: #999; stroke-width: 1; stroke-dasharray: 4 3; }\n"
           "  </style>\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(out, (kLeft + kRight) / 2, 30, "Roofline: " + hw.name, "middle", "title");

    for (int e = x_lo; e <= x_hi; ++e) {
        const double x = sx(std::pow(10.0, e));
        line(out, x, kTop, x, kBottom, "grid");
        text(out, x, kBottom + 18, format_decade(e));
    }
    for (int e = y_lo; e <= y_hi; ++e) {
        const double y = sy(std::pow(10.0, e));
        line(out, kLeft, y, kRight, y, "grid");
        text(out, kLeft - 8, y + 4, format_decade(e), "end");
    }
    line(out, kLeft, kBottom, kRight, kBottom, "axis");
    line(out, kLeft, kTop, kLeft, kBottom, "axis");
    text(out, (kLeft + kRight) / 2, kBottom + 44, "arithmetic intensity (FLOP/byte)");
    out += "  <text class=\"label\" x=\"22\" y=\"" + num((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 22 " +
           num((kTop + kBottom) / 2) + ")\">throughput (GFLOP/s)</text>\n";

    // Memory roof up to the ridge, compute roof beyond it.
    const double roof_start_x = std::pow(10.0, x_lo);
    out += "  <polyline class=\"roof\" points=\"" + num(sx(roof_start_x)) + "," +
           num(sy(hw.peak_bandwidth_gbps * roof_start_x)) + " " + num(sx(ridge)) + "," +
           num(sy(hw.peak_gflops)) + " " + num(sx(std::pow(10.0, x_hi))) + "," +
           num(sy(hw.peak_gflops)) + "\"/>\n";
    line(out, sx(ridge), kTop, sx(ridge), kBottom, "ridge");

    for (const NamedRooflinePoint* p : plottable) {
        const double eff = p->point.efficiency_pct;
        const char* color = eff >= bands.high_pct  ? "#2ca02c"
                            : eff < bands.low_pct ? "#d62728"
                                                  : "#ff7f0e";
        const double x = sx(p->point.arithmetic_intensity);
        const double y = sy(p->point.throughput_gflops);
        out += "  <circle class=\"workload\" data-name=\"" + p->name + "\" cx=\"" +
               num(x) + "\" cy=\"" + num(y) + "\" r=\"5\" fill=\"" + color + "\"/>\n";
        text(out, x + 8, y - 6, p->name, "start");
    }

    double footer_y = kBottom + 64;
    for (const NamedRooflinePoint* p : unplottable) {
        text(out, kLeft, footer_y, "not plotted (no finite position): " + p->name,
             "start");
        footer_y += 16;
    }

    out += "</svg>\n";
    return out;
}

}  // namespace gpustress
