#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "triage/types.hpp"

namespace triage {

struct SynthItemSpec {
    std::string id;
    double max_points = 1.0;
    double a_true = 1.0;
    double b_true = 0.0;
};

/// Configuration for the synthetic exam generator. Ground truth is binary
/// per item (full or zero raw points) drawn from a 2PL model; the AI grades
/// derive from truth through a cell-independent error model.
struct SynthConfig {
    int n_students = 342;

    // Explicit item list; when empty, n_items are drawn with discrimination
    // log-uniform in [a_low, a_high] and difficulty uniform in [b_low, b_high].
    std::vector<SynthItemSpec> items;
    int n_items = 19;
    double a_low = 0.5;
    double a_high = 2.5;
    double b_low = -2.0;
    double b_high = 2.0;
    // Generated items are worth 1 point, except the last one.
    double last_item_max_points = 2.0;

    // Error model. AI graders skew conservative: marking correct work wrong
    // (fn_rate) is more likely than the reverse (fp_rate). partial_rate is
    // the chance a truth-correct cell gets fractional credit from
    // {0.25, 0.5, 0.75} of max points; with items spanning the difficulty
    // range symmetrically, about half of all cells are truth-correct, so the
    // default 0.16 yields roughly 8% fractional AI scores overall.
    double fn_rate = 0.10;
    double fp_rate = 0.03;
    double partial_rate = 0.16;

    std::uint64_t seed = 42;

    void validate() const;
};

struct SynthData {
    ScoreMatrix truth;
    ScoreMatrix ai;
    std::vector<SynthItemSpec> item_truth;  // resolved items with true parameters
    std::vector<double> theta_truth;        // per student
};

/// Deterministic generation: identical config (including seed) produces
/// identical data, independent of evaluation order.
SynthData generate(const SynthConfig& cfg);

namespace synth_streams {
// Stream ids for the counter-based generator; fixed by the file-format
// contract so reimplementations can reproduce datasets bit-for-bit.
inline constexpr std::uint64_t kAbility = 1;
inline constexpr std::uint64_t kItemA = 2;
inline constexpr std::uint64_t kItemB = 3;
inline constexpr std::uint64_t kTruth = 4;
inline constexpr std::uint64_t kAiError = 5;
inline constexpr std::uint64_t kAiFraction = 6;
}  // namespace synth_streams

}  // namespace triage
