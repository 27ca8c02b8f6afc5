#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "triage/errors.hpp"

namespace triage {

struct RubricItem {
    std::string id;
    double max_points = 1.0;
};

/// Ordered rubric definition. Item order is the canonical column order
/// for every downstream artifact (fit output, heatmaps, CSV columns).
class RubricSpec {
public:
    explicit RubricSpec(std::vector<RubricItem> items);

    const std::vector<RubricItem>& items() const { return items_; }
    const RubricItem& item(std::size_t j) const { return items_[j]; }
    std::size_t size() const { return items_.size(); }
    double total_max_points() const { return total_; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    bool operator==(const RubricSpec& other) const;

private:
    std::vector<RubricItem> items_;
    double total_ = 0.0;
    std::unordered_map<std::string, std::size_t> index_;
};

struct CellValue {
    std::string student_id;
    std::string item_id;
    double raw_points = 0.0;
};

/// Students x rubric-items score table. Cells may be missing; scores are
/// stored as raw points and exposed normalized by the item maximum.
/// Immutable after construction.
class ScoreMatrix {
public:
    ScoreMatrix(std::vector<std::string> students, RubricSpec rubric,
                const std::vector<CellValue>& cells);

    std::size_t n_students() const { return students_.size(); }
    std::size_t n_items() const { return rubric_.size(); }
    const std::vector<std::string>& students() const { return students_; }
    const RubricSpec& rubric() const { return rubric_; }
    std::optional<std::size_t> student_index(std::string_view id) const;

    bool has_cell(std::size_t i, std::size_t j) const;
    double raw(std::size_t i, std::size_t j) const;         // raw points
    double normalized(std::size_t i, std::size_t j) const;  // raw / max_points
    std::size_t cell_count() const { return n_cells_; }
    bool dense() const { return n_cells_ == students_.size() * rubric_.size(); }

private:
    friend ScoreMatrix fill_missing_as_zero(const ScoreMatrix&);

    std::vector<std::string> students_;
    RubricSpec rubric_;
    std::vector<double> raw_;  // row-major, NaN = missing
    std::size_t n_cells_ = 0;
    std::unordered_map<std::string, std::size_t> student_index_;
};

/// Per-item 2PL parameters: discrimination a and difficulty b.
struct ItemParams {
    std::string item_id;
    double a = 1.0;
    double b = 0.0;
};

/// Latent ability per student, in matrix student order.
class AbilityEstimates {
public:
    AbilityEstimates() = default;
    AbilityEstimates(std::vector<std::string> students, std::vector<double> theta);

    const std::vector<std::string>& students() const { return students_; }
    const std::vector<double>& values() const { return theta_; }
    std::optional<double> theta_of(std::string_view student_id) const;
    std::size_t size() const { return theta_.size(); }

private:
    std::vector<std::string> students_;
    std::vector<double> theta_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct CellIndex {
    std::size_t student = 0;
    std::size_t item = 0;
    bool operator==(const CellIndex&) const = default;
};

/// Result of matching two score matrices over a shared rubric.
struct AlignedPairs {
    std::vector<std::string> students;       // common students, left-matrix order
    std::vector<std::size_t> ai_student;     // per common student: index into ai
    std::vector<std::size_t> truth_student;  // per common student: index into truth
    struct Cell {
        std::size_t common_student = 0;  // index into `students`
        std::size_t item = 0;            // rubric item index
    };
    std::vector<Cell> cells;  // present in both, (student, item) order
    std::vector<std::pair<std::string, std::string>> ai_only;
    std::vector<std::pair<std::string, std::string>> truth_only;
    bool disjoint_students = false;
};

}  // namespace triage
