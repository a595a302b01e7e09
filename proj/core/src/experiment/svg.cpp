#include "hybridcast/experiment/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hybridcast::experiment {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 210.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr const char* kPalette[] = {"#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a",
                                    "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::vector<PlotLine>& lines, bool log_scale) {
    const auto tf = [&](double v) { return log_scale ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& l : lines) {
        for (std::size_t i = 0; i < l.values.size() && i < l.dates.size(); ++i) {
            if (log_scale && !(l.values[i] > 0.0)) {
                continue;
            }
            const double x = l.dates[i].time_since_epoch().count();
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, tf(l.values[i]));
            y1 = std::max(y1, tf(l.values[i]));
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 == x0) {
        x1 = x0 + 1.0;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.04 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // y ticks
    for (int k = 0; k <= 5; ++k) {
        const double y = y0 + (y1 - y0) * k / 5.0;
        const double label = log_scale ? std::pow(10.0, y) : y;
        svg << "<line x1=\"" << kLeft << "\" x2=\"" << num(kLeft + pw) << "\" y1=\"" << num(py(y)) << "\" y2=\""
            << num(py(y)) << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << num(label)
            << "</text>\n";
    }
    // x ticks at January 1st
    const auto first = std::chrono::year_month_day(Date(std::chrono::days(static_cast<int>(x0))));
    const auto last = std::chrono::year_month_day(Date(std::chrono::days(static_cast<int>(x1))));
    const int span = static_cast<int>(last.year()) - static_cast<int>(first.year());
    const int every = std::max(1, span / 10 + (span % 10 != 0 ? 1 : 0));
    for (int yr = static_cast<int>(first.year()) + 1; yr <= static_cast<int>(last.year()); yr += every) {
        const Date d = std::chrono::year(yr) / std::chrono::January / 1;
        const double x = px(d.time_since_epoch().count());
        svg << "<line x1=\"" << num(x) << "\" x2=\"" << num(x) << "\" y1=\"" << kTop << "\" y2=\"" << num(kTop + ph)
            << "\" stroke=\"#eee\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">" << yr
            << "</text>\n";
    }
    if (log_scale) {
        svg << "<text x=\"14\" y=\"" << num(kTop + ph / 2) << "\" transform=\"rotate(-90 14 " << num(kTop + ph / 2)
            << ")\" text-anchor=\"middle\">equity (log scale)</text>\n";
    }

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& l = lines[li];
        const char* colour = kPalette[li % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << (li == 0 ? "1.6" : "1")
            << "\" points=\"";
        for (std::size_t i = 0; i < l.values.size() && i < l.dates.size(); ++i) {
            if (log_scale && !(l.values[i] > 0.0)) {
                continue;
            }
            svg << num(px(l.dates[i].time_since_epoch().count())) << ',' << num(py(tf(l.values[i]))) << ' ';
        }
        svg << "\"/>\n";
        const double ly = kTop + 8 + 16.0 * static_cast<double>(li);
        svg << "<line x1=\"" << num(kLeft + pw + 12) << "\" x2=\"" << num(kLeft + pw + 32) << "\" y1=\"" << num(ly)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4) << "\">" << escape(l.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hybridcast::experiment
