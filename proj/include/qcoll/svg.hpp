// Copyright 2026 The qcoll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal SVG emission for line plots and log-colored heatmaps.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcoll/errors.hpp"

namespace qcoll::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers_only = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
    return colors[i % 7];
}

inline std::string render(const LinePlot& p) {
    constexpr double W = 640, H = 420, L = 70, R = 160, T = 40, B = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto ty = [&](double y) { return p.log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : p.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (p.log_y && s.y[i] <= 0.0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(p.title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        o << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        const double ypix = H - B - (yv - y0) / (y1 - y0) * (H - T - B);
        o << "<text x=\"" << L - 6 << "\" y=\"" << fmt(ypix + 4) << "\" text-anchor=\"end\">"
          << (p.log_y ? "1e" + tick(yv) : tick(yv)) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(p.x_label)
      << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << escape(p.y_label) << "</text>\n";
    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        if (s.markers_only) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]) || (p.log_y && s.y[i] <= 0.0)) continue;
                o << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.y[i])) << "\" r=\"3\" fill=\""
                  << palette(k) << "\"/>\n";
            }
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << palette(k) << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i]) || (p.log_y && s.y[i] <= 0.0)) continue;
                o << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
            }
            o << "\"/>\n";
        }
        const double ly = T + 14 + 18.0 * static_cast<double>(k);
        o << "<rect x=\"" << W - R + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"10\" fill=\"" << palette(k)
          << "\"/>\n";
        o << "<text x=\"" << W - R + 30 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Grid heatmap; cells colored by log10(value) on a fixed viridis-like ramp.
struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;                  // column coordinates
    std::vector<double> y;                  // row coordinates
    std::vector<std::vector<double>> value; // [row][column]
    double log_min = -16.0;
    double log_max = 0.0;
};

inline std::string ramp(double u) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(u));
    const double f = u - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

inline std::string render(const Heatmap& h) {
    constexpr double W = 640, H = 420, L = 70, R = 110, T = 40, B = 50;
    const std::size_t nr = h.y.size(), nc = h.x.size();
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(h.title) << "</text>\n";
    if (nr > 0 && nc > 0) {
        const double cw = (W - L - R) / static_cast<double>(nc);
        const double ch = (H - T - B) / static_cast<double>(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            for (std::size_t c = 0; c < nc; ++c) {
                const double v = h.value[r][c];
                const std::string color =
                    (std::isfinite(v) && v > 0.0)
                        ? ramp((std::log10(v) - h.log_min) / (h.log_max - h.log_min))
                        : (std::isfinite(v) ? ramp(0.0) : std::string("#cccccc"));
                o << "<rect x=\"" << fmt(L + c * cw) << "\" y=\"" << fmt(H - B - (r + 1) * ch) << "\" width=\""
                  << fmt(cw + 0.3) << "\" height=\"" << fmt(ch + 0.3) << "\" fill=\"" << color << "\"/>\n";
            }
        }
        for (std::size_t c = 0; c < nc; c += std::max<std::size_t>(1, nc / 5)) {
            o << "<text x=\"" << fmt(L + (c + 0.5) * cw) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
              << tick(h.x[c]) << "</text>\n";
        }
        for (std::size_t r = 0; r < nr; r += std::max<std::size_t>(1, nr / 6)) {
            o << "<text x=\"" << L - 6 << "\" y=\"" << fmt(H - B - (r + 0.5) * ch + 4) << "\" text-anchor=\"end\">"
              << tick(h.y[r]) << "</text>\n";
        }
    }
    for (int i = 0; i <= 10; ++i) {
        const double u = i / 10.0;
        o << "<rect x=\"" << W - R + 20 << "\" y=\"" << fmt(H - B - (u + 0.1) * (H - T - B) / 1.1) << "\" width=\"16\" height=\""
          << fmt((H - T - B) / 11.0 + 0.5) << "\" fill=\"" << ramp(u) << "\"/>\n";
        if (i % 2 == 0) {
            o << "<text x=\"" << W - R + 42 << "\" y=\"" << fmt(H - B - (u + 0.05) * (H - T - B) / 1.1 + 4) << "\">1e"
              << tick(h.log_min + u * (h.log_max - h.log_min)) << "</text>\n";
        }
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(h.x_label)
      << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << escape(h.y_label) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace qcoll::svg
