#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "triage/filter.hpp"
#include "triage/irt.hpp"
#include "triage/metrics.hpp"
#include "triage/synth.hpp"
#include "triage/types.hpp"

namespace triage {

// Schema "triage-params-v1": one record per line, comma separated.
//   schema,triage-params-v1
//   meta,iterations,<int>        meta,converged,<true|false>
//   meta,log_posterior,<float>
//   item,<item_id>,<a>,<b>       (rubric order)
//   student,<student_id>,<theta> (matrix order)
// Floats use the shortest round-trip decimal form.
std::string format_params_file(const FitResult& fit);
void write_params_file(const std::filesystem::path& path, const FitResult& fit);
FitResult read_params_file(const std::filesystem::path& path);

// Schema "triage-synth-truth-v1": generating parameters of a synthetic
// dataset, for recovery experiments.
//   schema,triage-synth-truth-v1
//   meta,seed,<int>  meta,fn_rate,<float>  meta,fp_rate,<float>
//   meta,partial_rate,<float>
//   item,<item_id>,<max_points>,<a_true>,<b_true>
//   student,<student_id>,<theta>
std::string format_synth_truth(const SynthData& data, const SynthConfig& cfg);
void write_synth_truth(const std::filesystem::path& path, const SynthData& data,
                       const SynthConfig& cfg);

struct SynthProvenance {
    std::vector<SynthItemSpec> items;
    std::vector<std::string> students;
    std::vector<double> theta;
};
SynthProvenance read_synth_truth(const std::filesystem::path& path);

std::string format_scores_csv(const ScoreMatrix& matrix);
void write_scores_csv(const std::filesystem::path& path, const ScoreMatrix& matrix);

std::string format_rubric_csv(const RubricSpec& rubric);
void write_rubric_csv(const std::filesystem::path& path, const RubricSpec& rubric);

std::string format_decisions_csv(std::span<const DecisionRecord> records);
void write_decisions_csv(const std::filesystem::path& path,
                         std::span<const DecisionRecord> records);
std::vector<DecisionRecord> read_decisions_csv(const std::filesystem::path& path);

std::string format_sweep_csv(std::span<const SweepRow> rows);
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows);

std::string format_heatmap_csv(const HeatmapTable& table);
void write_heatmap_csv(const std::filesystem::path& path, const HeatmapTable& table);

}  // namespace triage
