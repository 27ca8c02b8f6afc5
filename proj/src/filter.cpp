#include "triage/filter.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "triage/errors.hpp"
#include "triage/text.hpp"

namespace triage {

void FilterConfig::validate() const {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidConfig("credit threshold t must be in [0,1]");
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidConfig("risk tolerance r must be in [0,1]");
}

double risk(double s, double p) {
    if (!(s >= 0.0 && s <= 1.0))
        throw OutOfRange("normalized score " + text::format_double(s) + " outside [0,1]");
    if (!(p > 0.0 && p < 1.0))
        throw OutOfRange("expected probability " + text::format_double(p) + " outside (0,1)");
    return std::abs(s - p);
}

Decision decide(double s, double p, const FilterConfig& cfg) {
    cfg.validate();
    if (s < cfg.t) return {Outcome::Route, RouteReason::BelowCreditThreshold};
    if (risk(s, p) > cfg.r) return {Outcome::Route, RouteReason::HighRisk};
    return {Outcome::Accept, RouteReason::None};
}

FilterOutput apply_filter(const ScoreMatrix& ai, const FitResult& fit, const FilterConfig& cfg) {
    cfg.validate();
    auto expected = expected_scores(fit, ai);  // throws CoverageGap on missing coverage

    FilterOutput out;
    out.records.reserve(ai.cell_count());
    for (std::size_t i = 0; i < ai.n_students(); ++i) {
        for (std::size_t j = 0; j < ai.n_items(); ++j) {
            if (!ai.has_cell(i, j)) continue;
            double s = ai.normalized(i, j);
            double p = expected.at(i, j);
            Decision d = decide(s, p, cfg);
            out.records.push_back({ai.students()[i], ai.rubric().item(j).id, s, p,
                                   std::abs(s - p), d.outcome, d.reason});
            ++out.total;
            if (d.outcome == Outcome::Accept) ++out.accepted;
        }
    }
    out.acceptance_rate =
        out.total == 0 ? 0.0 : static_cast<double>(out.accepted) / static_cast<double>(out.total);
    return out;
}

HeatmapTable build_risk_heatmap(std::span<const DecisionRecord> records) {
    if (records.empty()) throw EmptyInput("no decision records");

    HeatmapTable table;
    std::unordered_map<std::string, std::size_t> row_of, col_of;
    for (const auto& rec : records) {
        if (row_of.emplace(rec.student_id, table.students.size()).second)
            table.students.push_back(rec.student_id);
        if (col_of.emplace(rec.item_id, table.items.size()).second)
            table.items.push_back(rec.item_id);
    }
    table.risk.assign(table.students.size() * table.items.size(),
                      std::numeric_limits<double>::quiet_NaN());
    for (const auto& rec : records)
        table.risk[row_of[rec.student_id] * table.items.size() + col_of[rec.item_id]] = rec.risk;
    return table;
}

std::string to_string(Outcome o) { return o == Outcome::Accept ? "accept" : "route"; }

std::string to_string(RouteReason r) {
    switch (r) {
        case RouteReason::None: return "none";
        case RouteReason::BelowCreditThreshold: return "below_credit_threshold";
        case RouteReason::HighRisk: return "high_risk";
    }
    return "none";
}

}  // namespace triage
