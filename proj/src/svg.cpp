#include "kakeya/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kakeya {

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}
} // namespace

void write_loglog_svg(const std::string& path, const SweepResult& result) {
    if (result.points.empty()) throw std::invalid_argument("write_loglog_svg: no points");
    const double width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 40, mb = 60;

    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const SweepPoint& pt : result.points) {
        const double x = std::log2(pt.delta);
        const double y = std::log2(std::max(pt.value, 1e-300));
        if (first) {
            x_lo = x_hi = x;
            y_lo = y_hi = y;
            first = false;
        }
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    if (x_hi - x_lo < 1e-9) x_hi = x_lo + 1;
    if (y_hi - y_lo < 1e-9) y_hi = y_lo + 1;
    const double xpad = 0.05 * (x_hi - x_lo), ypad = 0.1 * (y_hi - y_lo);
    x_lo -= xpad;
    x_hi += xpad;
    y_lo -= ypad;
    y_hi += ypad;

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_loglog_svg: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << " " << height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << px(x_lo) << "' y1='" << py(y_lo) << "' x2='" << px(x_hi) << "' y2='"
        << py(y_lo) << "' stroke='black'/>\n";
    out << "<line x1='" << px(x_lo) << "' y1='" << py(y_lo) << "' x2='" << px(x_lo) << "' y2='"
        << py(y_hi) << "' stroke='black'/>\n";

    // Fitted line across the x-range.
    const double fy0 = result.fit.intercept + result.fit.slope * x_lo;
    const double fy1 = result.fit.intercept + result.fit.slope * x_hi;
    out << "<line x1='" << px(x_lo) << "' y1='" << py(fy0) << "' x2='" << px(x_hi) << "' y2='"
        << py(fy1) << "' stroke='#c0392b' stroke-width='1.5'/>\n";

    for (const SweepPoint& pt : result.points) {
        out << "<circle cx='" << px(std::log2(pt.delta)) << "' cy='"
            << py(std::log2(std::max(pt.value, 1e-300))) << "' r='4' fill='#2060c0'/>\n";
    }

    for (const double x : {x_lo + xpad, x_hi - xpad}) {
        out << "<text x='" << px(x) << "' y='" << height - mb + 20
            << "' font-size='12' text-anchor='middle'>" << num(x) << "</text>\n";
    }
    for (const double y : {y_lo + ypad, y_hi - ypad}) {
        out << "<text x='" << ml - 8 << "' y='" << py(y) + 4
            << "' font-size='12' text-anchor='end'>" << num(y) << "</text>\n";
    }
    out << "<text x='" << (width / 2) << "' y='" << height - 15
        << "' font-size='14' text-anchor='middle'>log2 delta</text>\n";
    out << "<text x='18' y='" << height / 2
        << "' font-size='14' text-anchor='middle' transform='rotate(-90 18 " << height / 2
        << ")'>log2 value</text>\n";
    std::string title = std::string(quantity_name(result.config.quantity)) +
                        ": slope " + num(result.fit.slope);
    if (result.predicted) title += ", predicted " + num(*result.predicted);
    title += ", r2 " + num(result.fit.r2);
    out << "<text x='" << width / 2 << "' y='22' font-size='14' text-anchor='middle'>" << title
        << "</text>\n";
    out << "</svg>\n";
}

} // namespace kakeya
