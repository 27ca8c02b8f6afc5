#include "triage/core_data.hpp"

#include <cmath>
#include <limits>

#include "triage/io.hpp"
#include "triage/text.hpp"

namespace triage {

namespace {
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
}

RubricSpec::RubricSpec(std::vector<RubricItem> items) : items_(std::move(items)) {
    if (items_.empty()) throw InvalidConfig("rubric has no items");
    for (std::size_t j = 0; j < items_.size(); ++j) {
        const auto& it = items_[j];
        if (it.id.empty()) throw InvalidConfig("rubric item with empty id");
        if (!(it.max_points > 0.0) || !std::isfinite(it.max_points))
            throw InvalidConfig("rubric item '" + it.id + "' must have positive max_points");
        if (!index_.emplace(it.id, j).second)
            throw InvalidConfig("duplicate rubric item id '" + it.id + "'");
        total_ += it.max_points;
    }
}

std::optional<std::size_t> RubricSpec::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool RubricSpec::operator==(const RubricSpec& other) const {
    if (items_.size() != other.items_.size()) return false;
    for (std::size_t j = 0; j < items_.size(); ++j)
        if (items_[j].id != other.items_[j].id || items_[j].max_points != other.items_[j].max_points)
            return false;
    return true;
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> students, RubricSpec rubric,
                         const std::vector<CellValue>& cells)
    : students_(std::move(students)),
      rubric_(std::move(rubric)),
      raw_(students_.size() * rubric_.size(), kMissing) {
    for (std::size_t i = 0; i < students_.size(); ++i) {
        if (students_[i].empty()) throw InvalidConfig("empty student id");
        if (!student_index_.emplace(students_[i], i).second)
            throw InvalidConfig("duplicate student id '" + students_[i] + "'");
    }
    for (const auto& cell : cells) {
        auto si = student_index_.find(cell.student_id);
        if (si == student_index_.end())
            throw InvalidConfig("cell references undeclared student '" + cell.student_id + "'");
        auto ji = rubric_.index_of(cell.item_id);
        if (!ji) throw UnknownItem("unknown item id '" + cell.item_id + "'");
        double max = rubric_.item(*ji).max_points;
        if (!std::isfinite(cell.raw_points) || cell.raw_points < 0.0 || cell.raw_points > max)
            throw OutOfRangeScore("score " + text::format_double(cell.raw_points) + " for (" +
                                  cell.student_id + ", " + cell.item_id + ") outside [0, " +
                                  text::format_double(max) + "]");
        double& slot = raw_[si->second * rubric_.size() + *ji];
        if (!std::isnan(slot))
            throw DuplicateCell("duplicate cell (" + cell.student_id + ", " + cell.item_id + ")");
        slot = cell.raw_points;
        ++n_cells_;
    }
}

std::optional<std::size_t> ScoreMatrix::student_index(std::string_view id) const {
    auto it = student_index_.find(std::string(id));
    if (it == student_index_.end()) return std::nullopt;
    return it->second;
}

bool ScoreMatrix::has_cell(std::size_t i, std::size_t j) const {
    return !std::isnan(raw_[i * rubric_.size() + j]);
}

double ScoreMatrix::raw(std::size_t i, std::size_t j) const {
    return raw_[i * rubric_.size() + j];
}

double ScoreMatrix::normalized(std::size_t i, std::size_t j) const {
    return raw_[i * rubric_.size() + j] / rubric_.item(j).max_points;
}

AbilityEstimates::AbilityEstimates(std::vector<std::string> students, std::vector<double> theta)
    : students_(std::move(students)), theta_(std::move(theta)) {
    for (std::size_t i = 0; i < students_.size(); ++i) index_.emplace(students_[i], i);
}

std::optional<double> AbilityEstimates::theta_of(std::string_view student_id) const {
    auto it = index_.find(std::string(student_id));
    if (it == index_.end()) return std::nullopt;
    return theta_[it->second];
}

RubricSpec load_rubric(const std::filesystem::path& path) {
    auto table = io::read_csv(path, "item_id,max_points");
    std::vector<RubricItem> items;
    items.reserve(table.rows.size());
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
        const auto& row = table.rows[n];
        auto pts = text::parse_double(row[1]);
        if (!pts)
            throw MalformedCsv(path.string() + ":" + std::to_string(n + 2) +
                               ": bad max_points '" + row[1] + "'");
        items.push_back({row[0], *pts});
    }
    if (items.empty()) throw MalformedCsv(path.string() + ": rubric has no items");
    return RubricSpec(std::move(items));
}

ScoreMatrix load_scores(const std::filesystem::path& path, const RubricSpec& rubric) {
    auto table = io::read_csv(path, "student_id,item_id,raw_points");
    std::vector<std::string> students;
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<CellValue> cells;
    cells.reserve(table.rows.size());
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
        const auto& row = table.rows[n];
        if (row[0].empty())
            throw MalformedCsv(path.string() + ":" + std::to_string(n + 2) + ": empty student_id");
        auto pts = text::parse_double(row[2]);
        if (!pts)
            throw MalformedCsv(path.string() + ":" + std::to_string(n + 2) +
                               ": bad raw_points '" + row[2] + "'");
        if (seen.emplace(row[0], students.size()).second) students.push_back(row[0]);
        cells.push_back({row[0], row[1], *pts});
    }
    return ScoreMatrix(std::move(students), rubric, cells);
}

AlignedPairs align(const ScoreMatrix& ai, const ScoreMatrix& truth) {
    if (!(ai.rubric() == truth.rubric()))
        throw RubricMismatch("matrices use different rubrics");

    AlignedPairs out;
    const std::size_t n_items = ai.n_items();
    for (std::size_t i = 0; i < ai.n_students(); ++i) {
        const std::string& id = ai.students()[i];
        auto ti = truth.student_index(id);
        bool any_common = false;
        if (ti) {
            std::size_t pos = out.students.size();
            bool listed = false;
            for (std::size_t j = 0; j < n_items; ++j) {
                bool in_ai = ai.has_cell(i, j);
                bool in_truth = truth.has_cell(*ti, j);
                if (in_ai && in_truth) {
                    if (!listed) {
                        out.students.push_back(id);
                        out.ai_student.push_back(i);
                        out.truth_student.push_back(*ti);
                        listed = true;
                    }
                    out.cells.push_back({pos, j});
                    any_common = true;
                } else if (in_ai) {
                    out.ai_only.emplace_back(id, ai.rubric().item(j).id);
                }
            }
        } else {
            for (std::size_t j = 0; j < n_items; ++j)
                if (ai.has_cell(i, j)) out.ai_only.emplace_back(id, ai.rubric().item(j).id);
        }
        (void)any_common;
    }
    for (std::size_t i = 0; i < truth.n_students(); ++i) {
        const std::string& id = truth.students()[i];
        auto si = ai.student_index(id);
        for (std::size_t j = 0; j < n_items; ++j) {
            if (!truth.has_cell(i, j)) continue;
            if (!si || !ai.has_cell(*si, j))
                out.truth_only.emplace_back(id, truth.rubric().item(j).id);
        }
    }
    out.disjoint_students = out.cells.empty();
    return out;
}

ScoreMatrix fill_missing_as_zero(const ScoreMatrix& matrix) {
    ScoreMatrix out = matrix;
    for (double& v : out.raw_)
        if (std::isnan(v)) v = 0.0;
    out.n_cells_ = out.students_.size() * out.rubric_.size();
    return out;
}

}  // namespace triage
