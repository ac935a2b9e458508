#pragma once

// Minimal SVG line/point charts for sweep results: one document per figure
// family (A3, A5, percent drop). Output depends only on the input, so
// identical results render byte-identical files.

#include "mpsbench/report.hpp"
#include "mpsbench/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace mpsbench {

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<PlotSeries> series;
};

struct SvgDocument {
    std::string name; // file stem, e.g. "a3"
    std::string content;
};

struct PlotSet {
    std::vector<SvgDocument> documents;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Roughly five round tick values covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#17becf"};

} // namespace detail

inline std::string render_svg(const Chart& chart) {
    constexpr double W = 640, H = 420, left = 90, right = 180, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : chart.series)
        for (const auto& [x, y] : s.points) {
            const double xv = chart.log_x ? std::log10(x) : x;
            x_lo = std::min(x_lo, xv), x_hi = std::max(x_hi, xv);
            y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
        }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
    y_lo = std::min(y_lo, 0.0);
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const double pad = 0.05 * (y_hi - y_lo);
    y_hi += pad;
    if (y_lo < 0.0) y_lo -= pad;

    auto px = [&](double x) { return left + ((chart.log_x ? std::log10(x) : x) - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
    using detail::fmt;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::xml_escape(chart.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : detail::nice_ticks(y_lo, y_hi)) {
        const double y = py(t);
        os << "<line x1=\"" << left - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << left + pw << "\" y2=\"" << fmt(y)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(t, "%.4g")
           << "</text>\n";
    }
    std::vector<double> x_ticks;
    if (chart.log_x) {
        std::vector<double> xs;
        for (const auto& s : chart.series)
            for (const auto& p : s.points) xs.push_back(p.first);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        x_ticks = xs;
    } else {
        x_ticks = detail::nice_ticks(x_lo, x_hi);
    }
    for (double t : x_ticks) {
        const double x = px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(x) << "\" y2=\"" << top + ph + 4
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t, "%.4g")
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
       << detail::xml_escape(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::xml_escape(chart.y_label) << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        const char* color = detail::kPalette[i % std::size(detail::kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.points.size(); ++j)
            os << (j ? " " : "") << fmt(px(s.points[j].first)) << ',' << fmt(py(s.points[j].second));
        os << "\"/>\n";
        for (const auto& [x, y] : s.points)
            os << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(i);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
           << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << detail::xml_escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

namespace detail {

inline std::string fixed_suffix(const std::map<std::string, double>& fixed) {
    std::string out;
    for (const auto& [k, v] : fixed) out += ", " + k + "=" + fmt(v);
    return out;
}

} // namespace detail

// Series keyed by the first swept axis; any further swept axes split the
// series. Series without a finite point are dropped with a warning.
inline PlotSet render_plots(const SweepResult& result) {
    require(!result.rows.empty(), "render_plots needs a non-empty result");
    PlotSet set;
    const auto axes = swept_axes(result);
    const Axis x_axis = axes.empty() ? Axis::FLow : axes.front();
    const bool log_x = x_axis == Axis::FLow || x_axis == Axis::FHigh;

    struct Family {
        std::string name;
        int harmonic;
        bool delta;
    };
    std::vector<Family> families;
    for (int k : {3, 5})
        if (result.harmonic_slot(k)) families.push_back({"a" + std::to_string(k), k, false});
    families.push_back({"delta", 0, true});

    for (const auto& fam : families) {
        Chart chart;
        chart.x_label = axis_label(x_axis);
        chart.log_x = log_x;
        if (fam.delta) {
            chart.title = "Harmonic drop, unbound to bound";
            chart.y_label = "Delta (%)";
        } else {
            chart.title = "Harmonic " + std::to_string(fam.harmonic) + " amplitude";
            chart.y_label = "A" + std::to_string(fam.harmonic) + " (V)";
        }

        // (label -> points) in first-seen order.
        std::vector<PlotSeries> series;
        auto add = [&](const std::string& label, double x, double y) {
            auto it = std::find_if(series.begin(), series.end(), [&](const PlotSeries& s) { return s.name == label; });
            if (it == series.end()) {
                series.push_back({label, {}});
                it = series.end() - 1;
            }
            if (std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0.0)) it->points.emplace_back(x, y);
        };
        for (const auto& row : result.rows) {
            std::map<std::string, double> fixed;
            for (std::size_t i = 1; i < axes.size(); ++i) fixed[axis_key(axes[i])] = axis_value(row.excitation, axes[i]);
            const double x = axis_value(row.excitation, x_axis);
            const std::string suffix = detail::fixed_suffix(fixed);
            if (fam.delta) {
                for (std::size_t slot = 0; slot < result.harmonics.size(); ++slot)
                    add(row.particle + " d" + std::to_string(result.harmonics[slot]) + suffix, x,
                        row_value(row, Quantity::Delta, slot));
            } else {
                const auto slot = *result.harmonic_slot(fam.harmonic);
                add(row.particle + " unbound" + suffix, x, row_value(row, Quantity::AmplitudeUnbound, slot));
                add(row.particle + " bound" + suffix, x, row_value(row, Quantity::AmplitudeBound, slot));
            }
        }
        for (auto& s : series) {
            if (s.points.empty()) {
                set.warnings.push_back(fam.name + ": series '" + s.name + "' has no finite points, skipped");
                continue;
            }
            std::stable_sort(s.points.begin(), s.points.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            chart.series.push_back(std::move(s));
        }
        set.documents.push_back({fam.name, render_svg(chart)});
    }
    return set;
}

} // namespace mpsbench
