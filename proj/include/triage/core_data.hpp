#pragma once

#include <filesystem>

#include "triage/types.hpp"

namespace triage {

// File schemas (UTF-8, comma separated, '.' decimal, LF or CRLF):
//   rubric CSV: header "item_id,max_points"
//   scores CSV: header "student_id,item_id,raw_points"

RubricSpec load_rubric(const std::filesystem::path& path);

/// Parses and validates a scores CSV against the rubric. Student order is
/// first appearance; raw points are normalized per item on access.
ScoreMatrix load_scores(const std::filesystem::path& path, const RubricSpec& rubric);

/// Pairs present in both matrices plus the one-sided leftovers.
/// Requires identical rubrics.
AlignedPairs align(const ScoreMatrix& ai, const ScoreMatrix& truth);

/// Dense copy where every missing (student, item) cell earns raw 0.
/// Idempotent; never alters existing cells.
ScoreMatrix fill_missing_as_zero(const ScoreMatrix& matrix);

}  // namespace triage
