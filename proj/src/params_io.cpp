#include "triage/params_io.hpp"

#include <cmath>
#include <sstream>

#include "triage/errors.hpp"
#include "triage/io.hpp"
#include "triage/text.hpp"

namespace triage {

namespace {

using text::format_double;

double require_double(std::string_view field, const std::string& context) {
    auto v = text::parse_double(field);
    if (!v) throw MalformedCsv(context + ": bad number '" + std::string(field) + "'");
    return *v;
}

struct SchemaFile {
    std::vector<std::vector<std::string_view>> records;  // excluding the schema line
    std::string content;                                 // owns the views
};

// Reads a record-per-line file and checks its schema tag.
SchemaFile read_schema_file(const std::filesystem::path& path, std::string_view schema) {
    SchemaFile file;
    file.content = io::read_file(path);
    auto lines = text::split_lines(file.content);
    if (lines.empty() || text::split(lines[0], ',') !=
                             std::vector<std::string_view>{"schema", schema})
        throw MalformedCsv(path.string() + ": expected schema line 'schema," +
                           std::string(schema) + "'");
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty())
            throw MalformedCsv(path.string() + ":" + std::to_string(n + 1) + ": empty line");
        file.records.push_back(text::split(lines[n], ','));
    }
    return file;
}

}  // namespace

std::string format_params_file(const FitResult& fit) {
    std::ostringstream out;
    out << "schema,triage-params-v1\n";
    out << "meta,iterations," << fit.iterations_used << "\n";
    out << "meta,converged," << (fit.converged ? "true" : "false") << "\n";
    out << "meta,log_posterior," << format_double(fit.final_log_posterior) << "\n";
    for (const auto& item : fit.items)
        out << "item," << item.item_id << "," << format_double(item.a) << ","
            << format_double(item.b) << "\n";
    const auto& students = fit.abilities.students();
    const auto& theta = fit.abilities.values();
    for (std::size_t i = 0; i < students.size(); ++i)
        out << "student," << students[i] << "," << format_double(theta[i]) << "\n";
    return std::move(out).str();
}

void write_params_file(const std::filesystem::path& path, const FitResult& fit) {
    io::atomic_write(path, format_params_file(fit));
}

FitResult read_params_file(const std::filesystem::path& path) {
    auto file = read_schema_file(path, "triage-params-v1");
    FitResult fit;
    std::vector<std::string> students;
    std::vector<double> theta;
    for (std::size_t n = 0; n < file.records.size(); ++n) {
        const auto& rec = file.records[n];
        std::string context = path.string() + ":" + std::to_string(n + 2);
        if (rec[0] == "meta" && rec.size() == 3) {
            if (rec[1] == "iterations")
                fit.iterations_used = static_cast<int>(require_double(rec[2], context));
            else if (rec[1] == "converged")
                fit.converged = rec[2] == "true";
            else if (rec[1] == "log_posterior")
                fit.final_log_posterior = require_double(rec[2], context);
            else
                throw MalformedCsv(context + ": unknown meta key '" + std::string(rec[1]) + "'");
        } else if (rec[0] == "item" && rec.size() == 4) {
            fit.items.push_back({std::string(rec[1]), require_double(rec[2], context),
                                 require_double(rec[3], context)});
        } else if (rec[0] == "student" && rec.size() == 3) {
            students.emplace_back(rec[1]);
            theta.push_back(require_double(rec[2], context));
        } else {
            throw MalformedCsv(context + ": unrecognized record");
        }
    }
    if (fit.items.empty()) throw MalformedCsv(path.string() + ": no item records");
    if (students.empty()) throw MalformedCsv(path.string() + ": no student records");
    fit.abilities = AbilityEstimates(std::move(students), std::move(theta));
    return fit;
}

std::string format_synth_truth(const SynthData& data, const SynthConfig& cfg) {
    std::ostringstream out;
    out << "schema,triage-synth-truth-v1\n";
    out << "meta,seed," << cfg.seed << "\n";
    out << "meta,fn_rate," << format_double(cfg.fn_rate) << "\n";
    out << "meta,fp_rate," << format_double(cfg.fp_rate) << "\n";
    out << "meta,partial_rate," << format_double(cfg.partial_rate) << "\n";
    for (const auto& item : data.item_truth)
        out << "item," << item.id << "," << format_double(item.max_points) << ","
            << format_double(item.a_true) << "," << format_double(item.b_true) << "\n";
    const auto& students = data.truth.students();
    for (std::size_t i = 0; i < students.size(); ++i)
        out << "student," << students[i] << "," << format_double(data.theta_truth[i]) << "\n";
    return std::move(out).str();
}

void write_synth_truth(const std::filesystem::path& path, const SynthData& data,
                       const SynthConfig& cfg) {
    io::atomic_write(path, format_synth_truth(data, cfg));
}

SynthProvenance read_synth_truth(const std::filesystem::path& path) {
    auto file = read_schema_file(path, "triage-synth-truth-v1");
    SynthProvenance prov;
    for (std::size_t n = 0; n < file.records.size(); ++n) {
        const auto& rec = file.records[n];
        std::string context = path.string() + ":" + std::to_string(n + 2);
        if (rec[0] == "meta" && rec.size() == 3) {
            continue;  // informational
        } else if (rec[0] == "item" && rec.size() == 5) {
            prov.items.push_back({std::string(rec[1]), require_double(rec[2], context),
                                  require_double(rec[3], context),
                                  require_double(rec[4], context)});
        } else if (rec[0] == "student" && rec.size() == 3) {
            prov.students.emplace_back(rec[1]);
            prov.theta.push_back(require_double(rec[2], context));
        } else {
            throw MalformedCsv(context + ": unrecognized record");
        }
    }
    return prov;
}

std::string format_scores_csv(const ScoreMatrix& matrix) {
    std::ostringstream out;
    out << "student_id,item_id,raw_points\n";
    for (std::size_t i = 0; i < matrix.n_students(); ++i)
        for (std::size_t j = 0; j < matrix.n_items(); ++j)
            if (matrix.has_cell(i, j))
                out << matrix.students()[i] << "," << matrix.rubric().item(j).id << ","
                    << format_double(matrix.raw(i, j)) << "\n";
    return std::move(out).str();
}

void write_scores_csv(const std::filesystem::path& path, const ScoreMatrix& matrix) {
    io::atomic_write(path, format_scores_csv(matrix));
}

std::string format_rubric_csv(const RubricSpec& rubric) {
    std::ostringstream out;
    out << "item_id,max_points\n";
    for (const auto& item : rubric.items())
        out << item.id << "," << format_double(item.max_points) << "\n";
    return std::move(out).str();
}

void write_rubric_csv(const std::filesystem::path& path, const RubricSpec& rubric) {
    io::atomic_write(path, format_rubric_csv(rubric));
}

std::string format_decisions_csv(std::span<const DecisionRecord> records) {
    std::ostringstream out;
    out << "student_id,item_id,s,p,risk,outcome,route_reason\n";
    for (const auto& rec : records)
        out << rec.student_id << "," << rec.item_id << "," << format_double(rec.s) << ","
            << format_double(rec.p) << "," << format_double(rec.risk) << ","
            << to_string(rec.outcome) << "," << to_string(rec.reason) << "\n";
    return std::move(out).str();
}

void write_decisions_csv(const std::filesystem::path& path,
                         std::span<const DecisionRecord> records) {
    io::atomic_write(path, format_decisions_csv(records));
}

std::vector<DecisionRecord> read_decisions_csv(const std::filesystem::path& path) {
    auto table = io::read_csv(path, "student_id,item_id,s,p,risk,outcome,route_reason");
    std::vector<DecisionRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
        const auto& row = table.rows[n];
        std::string context = path.string() + ":" + std::to_string(n + 2);
        DecisionRecord rec;
        rec.student_id = row[0];
        rec.item_id = row[1];
        rec.s = require_double(row[2], context);
        rec.p = require_double(row[3], context);
        rec.risk = require_double(row[4], context);
        if (row[5] == "accept")
            rec.outcome = Outcome::Accept;
        else if (row[5] == "route")
            rec.outcome = Outcome::Route;
        else
            throw MalformedCsv(context + ": bad outcome '" + row[5] + "'");
        if (row[6] == "none")
            rec.reason = RouteReason::None;
        else if (row[6] == "below_credit_threshold")
            rec.reason = RouteReason::BelowCreditThreshold;
        else if (row[6] == "high_risk")
            rec.reason = RouteReason::HighRisk;
        else
            throw MalformedCsv(context + ": bad route_reason '" + row[6] + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "t,r,r2,slope,offset_fraction,acceptance_rate,n_students,feasible\n";
    for (const auto& row : rows) {
        out << format_double(row.t) << "," << format_double(row.r) << ",";
        if (row.feasible)
            out << format_double(row.r2) << "," << format_double(row.slope) << ","
                << format_double(row.offset_fraction) << ",";
        else
            out << "nan,nan,nan,";
        out << format_double(row.acceptance_rate) << "," << row.n_students << ","
            << (row.feasible ? 1 : 0) << "\n";
    }
    return std::move(out).str();
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows) {
    io::atomic_write(path, format_sweep_csv(rows));
}

std::string format_heatmap_csv(const HeatmapTable& table) {
    std::ostringstream out;
    out << "student_id";
    for (const auto& item : table.items) out << "," << item;
    out << "\n";
    for (std::size_t i = 0; i < table.students.size(); ++i) {
        out << table.students[i];
        for (std::size_t j = 0; j < table.items.size(); ++j) {
            double v = table.at(i, j);
            out << ",";
            if (!std::isnan(v)) out << format_double(v);
        }
        out << "\n";
    }
    return std::move(out).str();
}

void write_heatmap_csv(const std::filesystem::path& path, const HeatmapTable& table) {
    io::atomic_write(path, format_heatmap_csv(table));
}

}  // namespace triage
