#pragma once

#include <span>
#include <string>
#include <vector>

#include "triage/irt.hpp"
#include "triage/types.hpp"

namespace triage {

struct FilterConfig {
    double t = 0.0;  // partial-credit threshold: cells with s < t are routed
    double r = 1.0;  // risk tolerance: cells with |s - p| > r are routed

    void validate() const;
};

enum class Outcome { Accept, Route };
enum class RouteReason { None, BelowCreditThreshold, HighRisk };

struct Decision {
    Outcome outcome = Outcome::Accept;
    RouteReason reason = RouteReason::None;
};

struct DecisionRecord {
    std::string student_id;
    std::string item_id;
    double s = 0.0;     // normalized AI score
    double p = 0.0;     // model-expected score
    double risk = 0.0;  // |s - p|
    Outcome outcome = Outcome::Accept;
    RouteReason reason = RouteReason::None;
};

/// Risk of accepting an AI judgment: absolute deviation between the
/// observed normalized score and the model expectation.
double risk(double s, double p);

/// Two-stage rule: the credit screen runs first (s < t routes with
/// BelowCreditThreshold), then the risk screen (risk > r routes with
/// HighRisk). Both boundaries are inclusive on the accept side.
Decision decide(double s, double p, const FilterConfig& cfg);

struct FilterOutput {
    std::vector<DecisionRecord> records;  // matrix (student, item) order
    std::size_t total = 0;
    std::size_t accepted = 0;
    double acceptance_rate = 0.0;
};

/// One decision per cell of `ai`, using expected scores from `fit`.
FilterOutput apply_filter(const ScoreMatrix& ai, const FitResult& fit, const FilterConfig& cfg);

struct HeatmapTable {
    std::vector<std::string> students;  // row order
    std::vector<std::string> items;     // column order
    std::vector<double> risk;           // row-major; NaN where no record exists
    double at(std::size_t i, std::size_t j) const { return risk[i * items.size() + j]; }
};

/// Dense students x items risk table; rows in first-appearance student
/// order, columns in first-appearance item order (rubric order when the
/// records came from apply_filter).
HeatmapTable build_risk_heatmap(std::span<const DecisionRecord> records);

std::string to_string(Outcome o);
std::string to_string(RouteReason r);

}  // namespace triage
