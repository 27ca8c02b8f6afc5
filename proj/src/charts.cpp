#include "triage/charts.hpp"

#include <algorithm>
#include <cmath>

#include "triage/errors.hpp"
#include "triage/svg.hpp"
#include "triage/text.hpp"

namespace triage {

namespace {

using svg::Doc;
using svg::Scale;
using text::format_fixed;

constexpr const char* kAxisColor = "#444444";
constexpr const char* kGridColor = "#dddddd";

struct Panel {
    double x0, y0, w, h;  // plot rectangle
    Scale sx, sy;

    Panel(double x0_, double y0_, double w_, double h_, double xlo, double xhi, double ylo,
          double yhi)
        : x0(x0_), y0(y0_), w(w_), h(h_) {
        sx = {xlo, xhi, x0, x0 + w};
        sy = {ylo, yhi, y0 + h, y0};  // y grows downward in SVG
    }

    void frame(Doc& doc, const std::string& title, const std::string& x_label,
               const std::string& y_label, int x_prec = 1, int y_prec = 1) const {
        for (double tick : svg::ticks(sx.domain_lo, sx.domain_hi)) {
            doc.line(sx(tick), y0, sx(tick), y0 + h, kGridColor, 0.5);
            doc.text(sx(tick), y0 + h + 14, format_fixed(tick, x_prec), 9.5, "middle");
        }
        for (double tick : svg::ticks(sy.domain_lo, sy.domain_hi)) {
            doc.line(x0, sy(tick), x0 + w, sy(tick), kGridColor, 0.5);
            doc.text(x0 - 5, sy(tick) + 3, format_fixed(tick, y_prec), 9.5, "end");
        }
        doc.rect(x0, y0, w, h, "none", kAxisColor, 1.0);
        if (!title.empty()) doc.text(x0 + w / 2, y0 - 8, title, 12, "middle");
        if (!x_label.empty()) doc.text(x0 + w / 2, y0 + h + 30, x_label, 11, "middle");
        if (!y_label.empty())
            doc.text(x0 - 38, y0 + h / 2, y_label, 11, "middle",
                     "rotate(-90 " + format_fixed(x0 - 38, 2) + " " +
                         format_fixed(y0 + h / 2, 2) + ")");
    }
};

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range padded_range(std::vector<double> values, double include_lo, double include_hi) {
    values.push_back(include_lo);
    values.push_back(include_hi);
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string render_icc_svg(const CurveTable& curves) {
    if (curves.theta_grid.empty()) throw EmptyGrid("empty theta grid");
    const double width = 780, height = 480;
    Doc doc(width, height);
    Panel panel(55, 35, 560, 390, curves.theta_grid.front(), curves.theta_grid.back(), 0.0, 1.0);
    panel.frame(doc, "Item characteristic curves", "ability", "P(correct)");

    const std::size_t n = curves.item_ids.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::string color = svg::series_color(k, n);
        std::vector<std::pair<double, double>> pts;
        pts.reserve(curves.theta_grid.size());
        for (std::size_t g = 0; g < curves.theta_grid.size(); ++g)
            pts.emplace_back(panel.sx(curves.theta_grid[g]), panel.sy(curves.columns[k][g]));
        doc.polyline(pts, color, 1.6);
        double ly = 40 + 16 * static_cast<double>(k);
        doc.line(630, ly - 3, 650, ly - 3, color, 2.5);
        doc.text(655, ly, curves.item_ids[k], 10);
    }
    return doc.str();
}

std::string render_heatmap_svg(const HeatmapTable& table) {
    if (table.students.empty() || table.items.empty()) throw EmptyInput("empty heatmap table");
    const std::size_t n_rows = table.students.size();
    const std::size_t n_cols = table.items.size();
    double cell_w = std::clamp(640.0 / static_cast<double>(n_cols), 8.0, 36.0);
    double cell_h = std::clamp(560.0 / static_cast<double>(n_rows), 1.2, 18.0);
    const double x0 = 70, y0 = 70;
    const double width = x0 + cell_w * static_cast<double>(n_cols) + 110;
    const double height = y0 + cell_h * static_cast<double>(n_rows) + 30;

    Doc doc(width, height);
    doc.text(x0, 24, "Risk heatmap", 13);
    for (std::size_t j = 0; j < n_cols; ++j) {
        double cx = x0 + cell_w * (static_cast<double>(j) + 0.5);
        doc.text(cx, y0 - 6, table.items[j], 9, "start",
                 "rotate(-55 " + format_fixed(cx, 2) + " " + format_fixed(y0 - 6, 2) + ")");
    }
    doc.text(26, y0 + cell_h * static_cast<double>(n_rows) / 2,
             "students (n=" + std::to_string(n_rows) + ")", 11, "middle",
             "rotate(-90 26 " + format_fixed(y0 + cell_h * static_cast<double>(n_rows) / 2, 2) +
                 ")");
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j) {
            double v = table.at(i, j);
            std::string fill = std::isnan(v) ? "white" : svg::risk_color(v);
            doc.rect(x0 + cell_w * static_cast<double>(j), y0 + cell_h * static_cast<double>(i),
                     cell_w, cell_h, fill);
        }

    // Color bar.
    double bar_x = x0 + cell_w * static_cast<double>(n_cols) + 30;
    double bar_h = std::min(200.0, cell_h * static_cast<double>(n_rows));
    for (int s = 0; s < 40; ++s) {
        double frac = 1.0 - (static_cast<double>(s) + 0.5) / 40.0;
        doc.rect(bar_x, y0 + bar_h * s / 40.0, 16, bar_h / 40.0 + 0.5, svg::risk_color(frac));
    }
    doc.text(bar_x + 20, y0 + 8, "1.0", 9);
    doc.text(bar_x + 20, y0 + bar_h, "0.0", 9);
    doc.text(bar_x, y0 - 10, "risk", 10);
    return doc.str();
}

std::string render_scatter_svg(std::span<const std::pair<double, double>> pairs,
                               const RegressionStats& stats) {
    if (pairs.empty()) throw EmptyInput("no points to plot");
    std::vector<double> xs, ys;
    for (const auto& [x, y] : pairs) {
        xs.push_back(x);
        ys.push_back(y);
    }
    Range rx = padded_range(xs, 0.0, 1.0);
    Range ry = padded_range(ys, 0.0, 1.0);
    // Shared square range keeps the identity line at 45 degrees.
    double lo = std::min(rx.lo, ry.lo), hi = std::max(rx.hi, ry.hi);

    const double width = 560, height = 540;
    Doc doc(width, height);
    Panel panel(60, 40, 440, 440, lo, hi, lo, hi);
    panel.frame(doc, "AI vs. truth totals", "truth total (points)", "AI total (points)", 0, 0);

    doc.line(panel.sx(lo), panel.sy(lo), panel.sx(hi), panel.sy(hi), "#999999", 1.0, true);
    double fit_lo = stats.offset + stats.slope * lo;
    double fit_hi = stats.offset + stats.slope * hi;
    doc.line(panel.sx(lo), panel.sy(fit_lo), panel.sx(hi), panel.sy(fit_hi), "#222222", 1.5);
    for (const auto& [x, y] : pairs) doc.circle(panel.sx(x), panel.sy(y), 2.6, "#4477aa");

    doc.text(70, 58, "slope " + format_fixed(stats.slope, 2), 11);
    doc.text(70, 74, "offset " + format_fixed(stats.offset, 2), 11);
    doc.text(70, 90, "R² " + format_fixed(stats.r2, 3), 11);
    doc.text(70, 106, "n " + std::to_string(stats.n), 11);
    return doc.str();
}

std::string render_sweep_svg(std::span<const SweepRow> rows) {
    if (rows.empty()) throw EmptyInput("no sweep rows");
    std::vector<double> t_values;
    for (const auto& row : rows)
        if (std::find(t_values.begin(), t_values.end(), row.t) == t_values.end())
            t_values.push_back(row.t);

    double r_lo = rows[0].r, r_hi = rows[0].r;
    std::vector<double> slopes, offsets;
    for (const auto& row : rows) {
        r_lo = std::min(r_lo, row.r);
        r_hi = std::max(r_hi, row.r);
        if (row.feasible) {
            slopes.push_back(row.slope);
            offsets.push_back(row.offset_fraction);
        }
    }
    Range slope_range = padded_range(slopes, 0.9, 1.1);
    Range offset_range = padded_range(offsets, -0.05, 0.05);

    const double panel_w = 300, panel_h = 220;
    const double width = 2 * panel_w + 170, height = 2 * panel_h + 150;
    Doc doc(width, height);

    struct Spec {
        const char* title;
        double lo, hi;
        int prec;
        double (*value)(const SweepRow&);
        bool feasible_only;
    };
    const Spec specs[4] = {
        {"R²", 0.0, 1.0, 1, [](const SweepRow& r) { return r.r2; }, true},
        {"slope", slope_range.lo, slope_range.hi, 2, [](const SweepRow& r) { return r.slope; },
         true},
        {"offset fraction", offset_range.lo, offset_range.hi, 2,
         [](const SweepRow& r) { return r.offset_fraction; }, true},
        {"acceptance rate", 0.0, 1.0, 1, [](const SweepRow& r) { return r.acceptance_rate; },
         false},
    };

    for (int panel_idx = 0; panel_idx < 4; ++panel_idx) {
        const Spec& spec = specs[panel_idx];
        double px = 60 + (panel_idx % 2) * (panel_w + 80);
        double py = 40 + (panel_idx / 2) * (panel_h + 70);
        Panel panel(px, py, panel_w, panel_h, r_lo, r_hi, spec.lo, spec.hi);
        panel.frame(doc, spec.title, "risk tolerance r", "", 1, spec.prec);
        for (std::size_t k = 0; k < t_values.size(); ++k) {
            std::string color = svg::series_color(k, t_values.size());
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : rows) {
                if (row.t != t_values[k]) continue;
                if (spec.feasible_only && !row.feasible) continue;
                pts.emplace_back(panel.sx(row.r), panel.sy(spec.value(row)));
            }
            doc.polyline(pts, color, 1.6);
        }
    }
    // Shared legend.
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        double lx = 60 + 90 * static_cast<double>(k);
        doc.line(lx, height - 18, lx + 20, height - 18, svg::series_color(k, t_values.size()),
                 2.5);
        doc.text(lx + 25, height - 14, "t=" + format_fixed(t_values[k], 2), 10);
    }
    return doc.str();
}

}  // namespace triage
