#include "qjet/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qjet {

namespace {

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 240.0;
constexpr double kMargin = 44.0;
constexpr double kGap = 40.0;

std::string num(double v) {
    // Fixed 6 decimals, trailing zeros trimmed; keeps output byte-stable.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    std::string s(buf, res.ptr);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

struct Panel {
    double x0;  // left edge of the plot area
    std::string title;
};

void draw_series(std::string& svg, const Panel& panel,
                 const std::vector<MetricsRecord>& metrics, bool use_fid) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const MetricsRecord& m : metrics) {
        const double v = use_fid ? m.fid : m.loss;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    const double x_first = static_cast<double>(metrics.front().epoch);
    const double x_last = static_cast<double>(metrics.back().epoch);
    const double x_span = x_last > x_first ? x_last - x_first : 1.0;

    const double px0 = panel.x0, py0 = kMargin;
    const double pw = kPanelW - 2.0 * kMargin + 24.0, ph = kPanelH - 2.0 * kMargin;
    auto sx = [&](double e) { return px0 + (e - x_first) / x_span * pw; };
    auto sy = [&](double v) { return py0 + ph - (v - lo) / (hi - lo) * ph; };

    svg += "<rect x=\"" + num(px0) + "\" y=\"" + num(py0) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg += "<text x=\"" + num(px0 + pw / 2.0) + "\" y=\"" + num(py0 - 16.0) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + panel.title + "</text>\n";
    svg += "<text x=\"" + num(px0 - 6.0) + "\" y=\"" + num(py0 + 4.0) +
           "\" text-anchor=\"end\" font-size=\"10\">" + num(hi) + "</text>\n";
    svg += "<text x=\"" + num(px0 - 6.0) + "\" y=\"" + num(py0 + ph + 4.0) +
           "\" text-anchor=\"end\" font-size=\"10\">" + num(lo) + "</text>\n";
    svg += "<text x=\"" + num(px0) + "\" y=\"" + num(py0 + ph + 16.0) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + num(x_first) + "</text>\n";
    svg += "<text x=\"" + num(px0 + pw) + "\" y=\"" + num(py0 + ph + 16.0) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + num(x_last) + "</text>\n";

    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < metrics.size(); ++i) {
        if (i > 0) svg += ' ';
        const double v = use_fid ? metrics[i].fid : metrics[i].loss;
        svg += num(sx(static_cast<double>(metrics[i].epoch))) + "," + num(sy(v));
    }
    svg += "\"/>\n";
}

} // namespace

std::string metrics_plot_svg(const std::vector<MetricsRecord>& metrics) {
    if (metrics.empty()) {
        throw std::invalid_argument("metrics_plot_svg: no metrics rows");
    }
    const double width = 2.0 * kPanelW + kGap;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                      "\" height=\"" + num(kPanelH) + "\" viewBox=\"0 0 " + num(width) + " " +
                      num(kPanelH) + "\" font-family=\"sans-serif\">\n";
    draw_series(svg, {kMargin, "loss"}, metrics, false);
    draw_series(svg, {kPanelW + kGap + kMargin, "fid"}, metrics, true);
    svg += "</svg>\n";
    return svg;
}

void write_metrics_plot(const std::string& path, const std::vector<MetricsRecord>& metrics) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    const std::string svg = metrics_plot_svg(metrics);
    f.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace qjet
