#pragma once

#include <span>
#include <utility>
#include <vector>

#include "triage/filter.hpp"
#include "triage/irt.hpp"
#include "triage/types.hpp"

namespace triage {

struct RegressionStats {
    double slope = 0.0;
    double offset = 0.0;           // same units as the totals
    double r2 = 0.0;               // squared Pearson correlation; 0 when y is flat
    double offset_fraction = 0.0;  // offset / total_max_points
    std::size_t n = 0;
};

/// Ordinary least squares of y on x over (x, y) pairs.
/// `total_max_points` scales the intercept into offset_fraction.
RegressionStats regress_totals(std::span<const std::pair<double, double>> pairs,
                               double total_max_points);

struct StudentTotals {
    std::vector<std::string> students;  // students with at least one cell in the subset
    std::vector<double> totals;         // raw points
};

/// Per-student raw-point sums over a cell subset of `matrix`.
StudentTotals totals_over(std::span<const CellIndex> cells, const ScoreMatrix& matrix);

struct SweepRow {
    double t = 0.0;
    double r = 0.0;
    bool feasible = false;  // regression had n >= 3 and x variance
    double r2 = 0.0;
    double slope = 0.0;
    double offset_fraction = 0.0;
    double acceptance_rate = 0.0;
    std::size_t n_students = 0;
};

/// Per-student (truth total, ai total) pairs over the aligned cells for
/// which `accepted` is true (empty mask = all cells). Students with no
/// accepted cell are dropped.
std::vector<std::pair<double, double>> paired_totals(const AlignedPairs& aligned,
                                                     const ScoreMatrix& ai,
                                                     const ScoreMatrix& truth,
                                                     std::span<const bool> accepted = {});

/// Agreement of AI vs truth per-student totals over all aligned cells.
RegressionStats unfiltered_stats(const ScoreMatrix& ai, const ScoreMatrix& truth);

/// Grid evaluation of the accept/route filter: for every (t, r), filter the
/// AI matrix, total the accepted cells on both sides, and regress AI on
/// truth. Row order is t outer, r inner.
std::vector<SweepRow> sweep(const ScoreMatrix& ai, const ScoreMatrix& truth,
                            const FitResult& fit, std::span<const double> t_grid,
                            std::span<const double> r_grid);

}  // namespace triage
