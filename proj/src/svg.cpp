#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dimscope/analysis.hpp"

namespace dimscope::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

const char* color_of(FrClass c) {
    switch (c) {
        case FrClass::fr1: return "#1f77b4";
        case FrClass::fr2: return "#d62728";
        case FrClass::unlabeled: return "#7f7f7f";
    }
    return "#000000";
}

struct LogAxis {
    double lo_exp = 0.0;
    double hi_exp = 1.0;

    static LogAxis fit(double lo, double hi) {
        LogAxis axis;
        axis.lo_exp = std::floor(std::log10(lo));
        axis.hi_exp = std::ceil(std::log10(hi));
        if (axis.hi_exp <= axis.lo_exp) axis.hi_exp = axis.lo_exp + 1.0;
        return axis;
    }
    double fraction(double v) const {
        return (std::log10(v) - lo_exp) / (hi_exp - lo_exp);
    }
};

}  // namespace

std::string scatter_log_log(std::span<const Point> points, const std::string& x_label,
                            const std::string& y_label, const std::string& title) {
    double x_lo = 1.0, x_hi = 10.0, y_lo = 1.0, y_hi = 10.0;
    bool first = true;
    for (const auto& p : points) {
        if (!(p.x > 0.0 && p.y > 0.0)) continue;
        if (first) {
            x_lo = x_hi = p.x;
            y_lo = y_hi = p.y;
            first = false;
        } else {
            x_lo = std::min(x_lo, p.x);
            x_hi = std::max(x_hi, p.x);
            y_lo = std::min(y_lo, p.y);
            y_hi = std::max(y_hi, p.y);
        }
    }
    const LogAxis x_axis = LogAxis::fit(x_lo, x_hi);
    const LogAxis y_axis = LogAxis::fit(y_lo, y_hi);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto map_x = [&](double v) { return kMarginLeft + x_axis.fraction(v) * plot_w; };
    auto map_y = [&](double v) { return kMarginTop + (1.0 - y_axis.fraction(v)) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";

    // Decade grid and tick labels on both axes.
    out << "  <g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double e = x_axis.lo_exp; e <= x_axis.hi_exp + 0.5; e += 1.0) {
        const double sx = map_x(std::pow(10.0, e));
        out << "    <line x1=\"" << fmt(sx) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\""
            << fmt(sx) << "\" y2=\"" << fmt(kMarginTop + plot_h) << "\"/>\n";
    }
    for (double e = y_axis.lo_exp; e <= y_axis.hi_exp + 0.5; e += 1.0) {
        const double sy = map_y(std::pow(10.0, e));
        out << "    <line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(sy) << "\" x2=\""
            << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(sy) << "\"/>\n";
    }
    out << "  </g>\n";

    out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (double e = x_axis.lo_exp; e <= x_axis.hi_exp + 0.5; e += 1.0) {
        const double sx = map_x(std::pow(10.0, e));
        out << "    <text x=\"" << fmt(sx) << "\" y=\"" << fmt(kMarginTop + plot_h + 16)
            << "\" text-anchor=\"middle\">1e" << static_cast<long>(e) << "</text>\n";
    }
    for (double e = y_axis.lo_exp; e <= y_axis.hi_exp + 0.5; e += 1.0) {
        const double sy = map_y(std::pow(10.0, e));
        out << "    <text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(sy + 4)
            << "\" text-anchor=\"end\">1e" << static_cast<long>(e) << "</text>\n";
    }
    out << "  </g>\n";

    out << "  <rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    out << "  <text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << " (log)</text>\n";
    out << "  <text x=\"18\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">" << y_label << " (log)</text>\n";

    // Legend.
    double legend_y = kMarginTop + 12.0;
    for (const FrClass c : {FrClass::fr1, FrClass::fr2, FrClass::unlabeled}) {
        out << "  <circle cx=\"" << fmt(kMarginLeft + plot_w - 90) << "\" cy=\""
            << fmt(legend_y) << "\" r=\"4\" fill=\"" << color_of(c)
            << "\" class=\"legend\"/>\n";
        out << "  <text x=\"" << fmt(kMarginLeft + plot_w - 80) << "\" y=\"" << fmt(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_string(c) << "</text>\n";
        legend_y += 16.0;
    }

    out << "  <g class=\"marks\">\n";
    for (const auto& p : points) {
        if (!(p.x > 0.0 && p.y > 0.0)) continue;
        out << "    <circle class=\"mark\" cx=\"" << fmt(map_x(p.x)) << "\" cy=\""
            << fmt(map_y(p.y)) << "\" r=\"3.5\" fill=\"" << color_of(p.fr_class)
            << "\" fill-opacity=\"0.75\"/>\n";
    }
    out << "  </g>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace dimscope::svg
