#ifndef CORPUS_LENS_CHART_HPP
#define CORPUS_LENS_CHART_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/format.hpp"

namespace corpus_lens {

enum class ChartKind { Bar, Histogram, Line, Scatter };

/// Data for one self-contained SVG chart. Which fields matter depends on
/// kind: bar uses categories+values, histogram uses values (bin counts)
/// plus bin_lo/bin_width, line and scatter use xs/ys (scatter optionally
/// labels points).
struct ChartSpec {
    ChartKind kind = ChartKind::Bar;
    std::string title;
    std::string x_label;
    std::string y_label;

    std::vector<std::string> categories;
    std::vector<double> values;
    double bin_lo = -1.0;
    double bin_width = 0.025;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::string> point_labels;
};

namespace detail {

inline std::string svg_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
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

struct Extent {
    double lo = 0.0, hi = 1.0;

    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    static Extent of(const std::vector<double>& vs, bool include_zero) {
        Extent e{vs.front(), vs.front()};
        if (include_zero) e = Extent{std::min(0.0, vs.front()), std::max(0.0, vs.front())};
        for (const auto v : vs) e.expand(v);
        if (e.hi == e.lo) e.hi = e.lo + 1.0; // avoid a degenerate scale
        return e;
    }
    double map(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

}  // namespace detail

/// Renders a ChartSpec as self-contained SVG 1.1 in a fixed 960x540 viewport.
/// Output is byte-identical for identical input: numbers are written with
/// 6 significant digits via to_chars, no timestamps or external resources.
inline std::string render_chart(const ChartSpec& spec) {
    constexpr double kW = 960.0, kH = 540.0;
    constexpr double kLeft = 70.0, kRight = 20.0, kTop = 50.0, kBottom = 60.0;
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;

    switch (spec.kind) {
        case ChartKind::Bar:
            if (spec.categories.empty() || spec.values.empty()) throw EmptySeries("bar chart: empty series");
            if (spec.categories.size() != spec.values.size())
                throw InvalidArgument("bar chart: categories/values size mismatch");
            break;
        case ChartKind::Histogram:
            if (spec.values.empty()) throw EmptySeries("histogram: no bins");
            break;
        case ChartKind::Line:
        case ChartKind::Scatter:
            if (spec.xs.empty() || spec.ys.empty()) throw EmptySeries("chart: empty series");
            if (spec.xs.size() != spec.ys.size()) throw InvalidArgument("chart: xs/ys size mismatch");
            break;
    }

    const auto num = [](double v) { return detail::fmt_double(v); };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"960\" height=\"540\" "
           "viewBox=\"0 0 960 540\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"480\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
           detail::svg_escape(spec.title) + "</text>\n";
    // axes frame
    svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) + "\" height=\"" +
           num(plot_h) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"480\" y=\"" + num(kH - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           detail::svg_escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"295\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 295)\">" +
           detail::svg_escape(spec.y_label) + "</text>\n";

    const auto y_axis_ticks = [&](const detail::Extent& ey) {
        std::string out;
        for (const double f : {0.0, 0.5, 1.0}) {
            const double v = ey.lo + f * (ey.hi - ey.lo);
            const double y = ey.map(v, kTop + plot_h, kTop);
            out += "<line x1=\"" + num(kLeft - 4.0) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
                   num(y) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
            out += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(y + 4.0) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
        }
        return out;
    };

    if (spec.kind == ChartKind::Bar) {
        const auto ey = detail::Extent::of(spec.values, true);
        svg += y_axis_ticks(ey);
        const auto n = spec.values.size();
        const double slot = plot_w / static_cast<double>(n);
        const double bar_w = slot * 0.8;
        const double y0 = ey.map(0.0, kTop + plot_h, kTop);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = spec.values[i];
            const double x = kLeft + slot * static_cast<double>(i) + slot * 0.1;
            const double yv = ey.map(v, kTop + plot_h, kTop);
            const double y = std::min(yv, y0);
            const double h = std::abs(y0 - yv);
            svg += "<rect class=\"d\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) +
                   "\" height=\"" + num(h) + "\" fill=\"#4878a8\"/>\n";
            svg += "<text x=\"" + num(x + bar_w / 2.0) + "\" y=\"" + num(kTop + plot_h + 16.0) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                   detail::svg_escape(spec.categories[i]) + "</text>\n";
        }
    } else if (spec.kind == ChartKind::Histogram) {
        auto ey = detail::Extent::of(spec.values, true);
        ey.lo = 0.0;
        svg += y_axis_ticks(ey);
        const auto n = spec.values.size();
        const double slot = plot_w / static_cast<double>(n);
        const double y0 = kTop + plot_h;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = spec.values[i];
            const double x = kLeft + slot * static_cast<double>(i);
            const double y = ey.map(v, kTop + plot_h, kTop);
            svg += "<rect class=\"d\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(slot) +
                   "\" height=\"" + num(y0 - y) + "\" fill=\"#4878a8\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
        }
        // x tick labels at both ends and the middle bin boundary
        const double lo = spec.bin_lo;
        const double hi = spec.bin_lo + spec.bin_width * static_cast<double>(n);
        for (const double f : {0.0, 0.5, 1.0}) {
            const double v = lo + f * (hi - lo);
            const double x = kLeft + plot_w * f;
            svg += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h + 16.0) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
        }
    } else {
        const auto ex = detail::Extent::of(spec.xs, false);
        const auto ey = detail::Extent::of(spec.ys, spec.kind == ChartKind::Line);
        svg += y_axis_ticks(ey);
        for (const double f : {0.0, 0.5, 1.0}) {
            const double v = ex.lo + f * (ex.hi - ex.lo);
            const double x = ex.map(v, kLeft, kLeft + plot_w);
            svg += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h + 16.0) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(v) + "</text>\n";
        }
        if (spec.kind == ChartKind::Line) {
            if (ey.lo < 0.0 && ey.hi > 0.0) {
                const double y0 = ey.map(0.0, kTop + plot_h, kTop);
                svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(kLeft + plot_w) +
                       "\" y2=\"" + num(y0) + "\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
            }
            std::string points;
            for (std::size_t i = 0; i < spec.xs.size(); ++i) {
                if (!points.empty()) points.push_back(' ');
                points += num(ex.map(spec.xs[i], kLeft, kLeft + plot_w)) + "," +
                          num(ey.map(spec.ys[i], kTop + plot_h, kTop));
            }
            svg += "<polyline class=\"d\" points=\"" + points +
                   "\" fill=\"none\" stroke=\"#b04030\" stroke-width=\"1.5\"/>\n";
            for (std::size_t i = 0; i < spec.xs.size(); ++i) {
                svg += "<circle cx=\"" + num(ex.map(spec.xs[i], kLeft, kLeft + plot_w)) + "\" cy=\"" +
                       num(ey.map(spec.ys[i], kTop + plot_h, kTop)) + "\" r=\"2.5\" fill=\"#b04030\"/>\n";
            }
        } else {
            for (std::size_t i = 0; i < spec.xs.size(); ++i) {
                const double x = ex.map(spec.xs[i], kLeft, kLeft + plot_w);
                const double y = ey.map(spec.ys[i], kTop + plot_h, kTop);
                svg += "<circle class=\"d\" cx=\"" + num(x) + "\" cy=\"" + num(y) +
                       "\" r=\"4\" fill=\"#4878a8\"/>\n";
                if (i < spec.point_labels.size() && !spec.point_labels[i].empty()) {
                    svg += "<text x=\"" + num(x + 6.0) + "\" y=\"" + num(y - 6.0) +
                           "\" font-family=\"sans-serif\" font-size=\"10\">" +
                           detail::svg_escape(spec.point_labels[i]) + "</text>\n";
                }
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace corpus_lens

#endif
