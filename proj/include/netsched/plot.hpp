/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_PLOT_HPP
#define NETSCHED_PLOT_HPP

// Minimal static SVG line charts with a log10 y axis.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace netsched {

struct LineChart {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    std::vector<std::vector<double>> series;  // y values at x = 0, 1, 2, ...
};

inline void write_svg(std::ostream& os, const LineChart& chart) {
    constexpr double width = 720, height = 420, left = 70, right = 20, top = 40, bottom = 50;
    constexpr double floor_value = 1e-300;
    std::size_t n = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : chart.series) {
        n = std::max(n, s.size());
        for (double y : s) {
            if (!std::isfinite(y)) continue;
            const double ly = std::log10(std::max(y, floor_value));
            lo = std::min(lo, ly);
            hi = std::max(hi, ly);
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    lo = std::floor(lo);
    hi = std::ceil(hi);
    if (hi <= lo) hi = lo + 1.0;
    const double xs = n > 1 ? (width - left - right) / static_cast<double>(n - 1) : 1.0;
    auto px = [&](std::size_t i) { return left + xs * static_cast<double>(i); };
    auto py = [&](double y) {
        const double ly = std::log10(std::max(y, floor_value));
        return top + (hi - ly) / (hi - lo) * (height - top - bottom);
    };

    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << chart.title << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    for (double e = lo; e <= hi; e += 1.0) {
        const double y = top + (hi - e) / (hi - lo) * (height - top - bottom);
        os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e"
           << static_cast<int>(e) << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
       << chart.x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 " << height / 2
       << ")\" text-anchor=\"middle\">" << chart.y_label << "</text>\n";
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << palette[k % 10] << "\" points=\"";
        const auto& s = chart.series[k];
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!std::isfinite(s[i])) break;
            os << px(i) << ',' << py(s[i]) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    os << std::defaultfloat;
}

}  // namespace netsched

#endif  // NETSCHED_PLOT_HPP
