#include "triage/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "triage/core_data.hpp"
#include "triage/errors.hpp"

namespace triage {

RegressionStats regress_totals(std::span<const std::pair<double, double>> pairs,
                               double total_max_points) {
    if (pairs.size() < 3)
        throw TooFewPoints("regression needs at least 3 points, got " +
                           std::to_string(pairs.size()));
    const auto n = static_cast<double>(pairs.size());

    double x_min = pairs[0].first, x_max = pairs[0].first;
    double sum_x = 0.0, sum_y = 0.0;
    for (const auto& [x, y] : pairs) {
        sum_x += x;
        sum_y += y;
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    if (x_min == x_max) throw DegenerateX("x values are all identical");

    const double mean_x = sum_x / n, mean_y = sum_y / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pairs) {
        double dx = x - mean_x, dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DegenerateX("zero variance in x");

    RegressionStats stats;
    stats.n = pairs.size();
    stats.slope = sxy / sxx;
    stats.offset = mean_y - stats.slope * mean_x;
    stats.r2 = syy == 0.0 ? 0.0 : std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    stats.offset_fraction = stats.offset / total_max_points;
    return stats;
}

StudentTotals totals_over(std::span<const CellIndex> cells, const ScoreMatrix& matrix) {
    std::vector<double> sums(matrix.n_students(), 0.0);
    std::vector<bool> touched(matrix.n_students(), false);
    for (const auto& cell : cells) {
        if (cell.student >= matrix.n_students() || cell.item >= matrix.n_items() ||
            !matrix.has_cell(cell.student, cell.item))
            throw UnknownCell("cell (" + std::to_string(cell.student) + ", " +
                              std::to_string(cell.item) + ") not present in matrix");
        sums[cell.student] += matrix.raw(cell.student, cell.item);
        touched[cell.student] = true;
    }
    StudentTotals out;
    for (std::size_t i = 0; i < matrix.n_students(); ++i)
        if (touched[i]) {
            out.students.push_back(matrix.students()[i]);
            out.totals.push_back(sums[i]);
        }
    return out;
}

std::vector<std::pair<double, double>> paired_totals(const AlignedPairs& aligned,
                                                     const ScoreMatrix& ai,
                                                     const ScoreMatrix& truth,
                                                     std::span<const bool> accepted) {
    std::vector<double> sum_ai(aligned.students.size(), 0.0);
    std::vector<double> sum_truth(aligned.students.size(), 0.0);
    std::vector<bool> touched(aligned.students.size(), false);
    for (std::size_t k = 0; k < aligned.cells.size(); ++k) {
        if (!accepted.empty() && !accepted[k]) continue;
        const auto& cell = aligned.cells[k];
        sum_ai[cell.common_student] += ai.raw(aligned.ai_student[cell.common_student], cell.item);
        sum_truth[cell.common_student] +=
            truth.raw(aligned.truth_student[cell.common_student], cell.item);
        touched[cell.common_student] = true;
    }
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(aligned.students.size());
    for (std::size_t s = 0; s < aligned.students.size(); ++s)
        if (touched[s]) pairs.emplace_back(sum_truth[s], sum_ai[s]);
    return pairs;
}

RegressionStats unfiltered_stats(const ScoreMatrix& ai, const ScoreMatrix& truth) {
    auto aligned = align(ai, truth);
    auto pairs = paired_totals(aligned, ai, truth);
    return regress_totals(pairs, ai.rubric().total_max_points());
}

std::vector<SweepRow> sweep(const ScoreMatrix& ai, const ScoreMatrix& truth,
                            const FitResult& fit, std::span<const double> t_grid,
                            std::span<const double> r_grid) {
    if (t_grid.empty() || r_grid.empty()) throw EmptyGrid("sweep grids must be non-empty");
    for (double t : t_grid)
        if (!(t >= 0.0 && t <= 1.0)) throw InvalidConfig("t grid value outside [0,1]");
    for (double r : r_grid)
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidConfig("r grid value outside [0,1]");

    auto aligned = align(ai, truth);
    auto expected = expected_scores(fit, ai);  // CoverageGap when fit is incomplete

    // Normalized AI score and expectation per aligned cell, in cell order.
    std::vector<double> s_cell(aligned.cells.size()), p_cell(aligned.cells.size());
    for (std::size_t k = 0; k < aligned.cells.size(); ++k) {
        const auto& cell = aligned.cells[k];
        std::size_t i = aligned.ai_student[cell.common_student];
        s_cell[k] = ai.normalized(i, cell.item);
        p_cell[k] = expected.at(i, cell.item);
    }

    const double total_max = ai.rubric().total_max_points();
    std::vector<SweepRow> rows;
    rows.reserve(t_grid.size() * r_grid.size());
    std::vector<bool> accepted(aligned.cells.size());
    for (double t : t_grid) {
        for (double r : r_grid) {
            FilterConfig cfg{t, r};
            std::size_t n_accepted = 0;
            for (std::size_t k = 0; k < aligned.cells.size(); ++k) {
                Decision d = decide(s_cell[k], p_cell[k], cfg);
                accepted[k] = d.outcome == Outcome::Accept;
                if (accepted[k]) ++n_accepted;
            }
            SweepRow row;
            row.t = t;
            row.r = r;
            row.acceptance_rate = aligned.cells.empty()
                                      ? 0.0
                                      : static_cast<double>(n_accepted) /
                                            static_cast<double>(aligned.cells.size());
            auto pairs = paired_totals(aligned, ai, truth, accepted);
            row.n_students = pairs.size();
            try {
                RegressionStats stats = regress_totals(pairs, total_max);
                row.feasible = true;
                row.r2 = stats.r2;
                row.slope = stats.slope;
                row.offset_fraction = stats.offset_fraction;
            } catch (const TooFewPoints&) {
            } catch (const DegenerateX&) {
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace triage
