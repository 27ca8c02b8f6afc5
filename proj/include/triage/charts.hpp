#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "triage/filter.hpp"
#include "triage/irt.hpp"
#include "triage/metrics.hpp"

namespace triage {

/// Item characteristic curves over the sampled ability grid.
std::string render_icc_svg(const CurveTable& curves);

/// Students x items risk panel, blue (0) to red (1); missing cells white.
std::string render_heatmap_svg(const HeatmapTable& table);

/// AI total vs truth total per student, with the OLS fit and the identity
/// line; slope/offset/r2 printed in the corner.
std::string render_scatter_svg(std::span<const std::pair<double, double>> pairs,
                               const RegressionStats& stats);

/// Four panels (r2, slope, offset fraction, acceptance rate) against the
/// risk tolerance, one polyline per credit threshold.
std::string render_sweep_svg(std::span<const SweepRow> rows);

}  // namespace triage
