#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triage/charts.hpp"
#include "triage/core_data.hpp"
#include "triage/errors.hpp"
#include "triage/filter.hpp"
#include "triage/io.hpp"
#include "triage/irt.hpp"
#include "triage/manifest.hpp"
#include "triage/metrics.hpp"
#include "triage/params_io.hpp"
#include "triage/synth.hpp"
#include "triage/text.hpp"
#include "triage/version.hpp"

namespace fs = std::filesystem;
using namespace triage;

namespace {

// Exit codes: 0 success, 3 ingestion/validation failure, 4 computation
// failure, 5 unexpected error. CLI11 usage errors keep their own codes.
constexpr int kExitIngestion = 3;
constexpr int kExitCompute = 4;
constexpr int kExitInternal = 5;

struct GlobalOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    bool quiet = false;
};

void say(const GlobalOpts& opts, const std::string& message) {
    if (!opts.quiet) std::cout << message << "\n";
}

fs::path out_path(const GlobalOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return fs::path(opts.out_dir) / name;
}

// Accepts "a,b,c" or "start:stop:step" (stop inclusive up to rounding).
// Values are snapped to 12 decimals so swept thresholds print cleanly.
std::vector<double> parse_grid(const std::string& spec) {
    auto snap = [](double v) { return std::round(v * 1e12) / 1e12; };
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        auto parts = text::split(spec, ':');
        if (parts.size() != 3) throw InvalidConfig("grid range must be start:stop:step");
        auto start = text::parse_double(parts[0]);
        auto stop = text::parse_double(parts[1]);
        auto step = text::parse_double(parts[2]);
        if (!start || !stop || !step || !(*step > 0.0) || *stop < *start)
            throw InvalidConfig("bad grid range '" + spec + "'");
        for (int k = 0;; ++k) {
            double v = *start + *step * k;
            if (v > *stop + *step * 1e-9) break;
            grid.push_back(snap(v));
        }
    } else {
        for (auto field : text::split(spec, ',')) {
            auto v = text::parse_double(field);
            if (!v) throw InvalidConfig("bad grid value '" + std::string(field) + "'");
            grid.push_back(snap(*v));
        }
    }
    if (grid.empty()) throw InvalidConfig("empty grid '" + spec + "'");
    for (double v : grid)
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidConfig("grid value outside [0,1]");
    return grid;
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run_simulate(const GlobalOpts& opts, const SynthConfig& cfg) {
    Timer timer;
    SynthData data = generate(cfg);

    RunManifest manifest("simulate", kVersion);
    manifest.set_config("seed", static_cast<long long>(cfg.seed));
    manifest.set_config("n_students", static_cast<long long>(cfg.n_students));
    manifest.set_config("n_items", static_cast<long long>(cfg.n_items));
    manifest.set_config("fn_rate", cfg.fn_rate);
    manifest.set_config("fp_rate", cfg.fp_rate);
    manifest.set_config("partial_rate", cfg.partial_rate);

    fs::path truth_path = out_path(opts, "truth.csv");
    fs::path ai_path = out_path(opts, "ai.csv");
    fs::path rubric_path = out_path(opts, "rubric.csv");
    fs::path prov_path = out_path(opts, "synth_truth.csv");
    write_scores_csv(truth_path, data.truth);
    write_scores_csv(ai_path, data.ai);
    write_rubric_csv(rubric_path, data.truth.rubric());
    write_synth_truth(prov_path, data, cfg);
    for (const auto& p : {truth_path, ai_path, rubric_path, prov_path}) manifest.add_output(p);
    manifest.set_duration_seconds(timer.seconds());
    manifest.write(out_path(opts, "simulate_manifest.json"));
    say(opts, "simulated " + std::to_string(data.truth.n_students()) + " students x " +
                  std::to_string(data.truth.n_items()) + " items (seed " +
                  std::to_string(cfg.seed) + ")");
    return 0;
}

int run_fit(const GlobalOpts& opts, const std::string& scores, const std::string& rubric,
            const FitConfig& cfg) {
    Timer timer;
    RunManifest manifest("fit", kVersion);
    manifest.add_input(scores);
    manifest.add_input(rubric);
    manifest.set_config("quadrature_nodes", static_cast<long long>(cfg.quadrature_nodes));
    manifest.set_config("max_iterations", static_cast<long long>(cfg.max_iterations));
    manifest.set_config("convergence_tol", cfg.convergence_tol);

    RubricSpec spec = load_rubric(rubric);
    ScoreMatrix matrix = fill_missing_as_zero(load_scores(scores, spec));
    FitResult fit = fit_2pl(matrix, cfg);

    fs::path params_path = out_path(opts, "params.csv");
    write_params_file(params_path, fit);
    manifest.add_output(params_path);
    manifest.set_result("iterations", static_cast<double>(fit.iterations_used));
    manifest.set_result("converged", fit.converged ? "true" : "false");
    manifest.set_result("log_posterior", fit.final_log_posterior);
    manifest.set_duration_seconds(timer.seconds());
    manifest.write(out_path(opts, "fit_manifest.json"));
    say(opts, "fit " + std::to_string(fit.items.size()) + " items, " +
                  std::to_string(fit.abilities.size()) + " students in " +
                  std::to_string(fit.iterations_used) + " iterations (" +
                  (fit.converged ? "converged" : "max iterations") + ")");
    return 0;
}

int run_filter(const GlobalOpts& opts, const std::string& scores, const std::string& rubric,
               const std::string& params, double t, double r) {
    Timer timer;
    RunManifest manifest("filter", kVersion);
    manifest.add_input(scores);
    manifest.add_input(rubric);
    manifest.add_input(params);
    manifest.set_config("t", t);
    manifest.set_config("r", r);

    RubricSpec spec = load_rubric(rubric);
    ScoreMatrix matrix = fill_missing_as_zero(load_scores(scores, spec));
    FitResult fit = read_params_file(params);
    FilterOutput output = apply_filter(matrix, fit, FilterConfig{t, r});

    fs::path decisions_path = out_path(opts, "decisions.csv");
    write_decisions_csv(decisions_path, output.records);
    manifest.add_output(decisions_path);
    manifest.set_result("accepted", static_cast<double>(output.accepted));
    manifest.set_result("total", static_cast<double>(output.total));
    manifest.set_result("acceptance_rate", output.acceptance_rate);
    manifest.set_duration_seconds(timer.seconds());
    manifest.write(out_path(opts, "filter_manifest.json"));
    std::cout << "accepted " << output.accepted << "/" << output.total
              << " cells (acceptance_rate " << text::format_double(output.acceptance_rate)
              << ")\n";
    return 0;
}

int run_sweep(const GlobalOpts& opts, const std::string& ai, const std::string& truth,
              const std::string& rubric, const std::string& params, const std::string& t_spec,
              const std::string& r_spec) {
    Timer timer;
    RunManifest manifest("sweep", kVersion);
    manifest.add_input(ai);
    manifest.add_input(truth);
    manifest.add_input(rubric);
    manifest.add_input(params);
    manifest.set_config("t_grid", t_spec);
    manifest.set_config("r_grid", r_spec);

    std::vector<double> t_grid = parse_grid(t_spec);
    std::vector<double> r_grid = parse_grid(r_spec);
    RubricSpec spec = load_rubric(rubric);
    ScoreMatrix ai_matrix = fill_missing_as_zero(load_scores(ai, spec));
    ScoreMatrix truth_matrix = fill_missing_as_zero(load_scores(truth, spec));
    FitResult fit = read_params_file(params);

    std::vector<SweepRow> rows = sweep(ai_matrix, truth_matrix, fit, t_grid, r_grid);

    fs::path csv_path = out_path(opts, "sweep.csv");
    fs::path svg_path = out_path(opts, "sweep.svg");
    write_sweep_csv(csv_path, rows);
    io::atomic_write(svg_path, render_sweep_svg(rows));
    manifest.add_output(csv_path);
    manifest.add_output(svg_path);
    manifest.set_result("rows", static_cast<double>(rows.size()));
    manifest.set_duration_seconds(timer.seconds());
    manifest.write(out_path(opts, "sweep_manifest.json"));
    say(opts, "swept " + std::to_string(t_grid.size()) + " x " + std::to_string(r_grid.size()) +
                  " thresholds (" + std::to_string(rows.size()) + " rows)");
    return 0;
}

int run_report(const GlobalOpts& opts, const std::string& params, const std::string& decisions,
               const std::string& ai, const std::string& truth, const std::string& rubric,
               double theta_min, double theta_max, double theta_step) {
    Timer timer;
    RunManifest manifest("report", kVersion);
    bool any = false;

    if (!params.empty()) {
        manifest.add_input(params);
        FitResult fit = read_params_file(params);
        if (!(theta_step > 0.0) || theta_max <= theta_min)
            throw InvalidConfig("bad theta grid for the ICC figure");
        std::vector<double> grid;
        for (double v = theta_min; v <= theta_max + theta_step * 1e-9; v += theta_step)
            grid.push_back(v);
        fs::path icc_path = out_path(opts, "icc.svg");
        io::atomic_write(icc_path, render_icc_svg(sample_icc_curves(fit, grid)));
        manifest.add_output(icc_path);
        say(opts, "wrote icc.svg (" + std::to_string(fit.items.size()) + " curves)");
        any = true;
    }
    if (!decisions.empty()) {
        manifest.add_input(decisions);
        auto records = read_decisions_csv(decisions);
        HeatmapTable table = build_risk_heatmap(records);
        fs::path csv_path = out_path(opts, "heatmap.csv");
        fs::path svg_path = out_path(opts, "heatmap.svg");
        write_heatmap_csv(csv_path, table);
        io::atomic_write(svg_path, render_heatmap_svg(table));
        manifest.add_output(csv_path);
        manifest.add_output(svg_path);
        say(opts, "wrote heatmap.csv / heatmap.svg (" + std::to_string(table.students.size()) +
                      " x " + std::to_string(table.items.size()) + ")");
        any = true;
    }
    if (!ai.empty() || !truth.empty()) {
        if (ai.empty() || truth.empty() || rubric.empty())
            throw InvalidConfig("scatter figure needs --ai, --truth and --rubric");
        manifest.add_input(ai);
        manifest.add_input(truth);
        manifest.add_input(rubric);
        RubricSpec spec = load_rubric(rubric);
        ScoreMatrix ai_matrix = fill_missing_as_zero(load_scores(ai, spec));
        ScoreMatrix truth_matrix = fill_missing_as_zero(load_scores(truth, spec));
        auto aligned = align(ai_matrix, truth_matrix);
        auto pairs = paired_totals(aligned, ai_matrix, truth_matrix);
        RegressionStats stats = regress_totals(pairs, spec.total_max_points());
        fs::path scatter_path = out_path(opts, "scatter.svg");
        io::atomic_write(scatter_path, render_scatter_svg(pairs, stats));
        manifest.add_output(scatter_path);
        manifest.set_result("slope", stats.slope);
        manifest.set_result("offset", stats.offset);
        manifest.set_result("r2", stats.r2);
        say(opts, "wrote scatter.svg (slope " + text::format_fixed(stats.slope, 2) + ", R2 " +
                      text::format_fixed(stats.r2, 3) + ", n " + std::to_string(stats.n) + ")");
        any = true;
    }
    if (!any)
        throw InvalidConfig("report needs at least one of --params, --decisions, --ai/--truth");
    manifest.set_duration_seconds(timer.seconds());
    manifest.write(out_path(opts, "report_manifest.json"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grading triage toolkit: fit a 2PL model to rubric scores, flag risky AI "
                 "grading decisions, and quantify the workload-quality trade-off."};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts opts;
    app.add_option("--out-dir", opts.out_dir, "Directory for output artifacts")
        ->capture_default_str();
    app.add_option("--seed", opts.seed, "Random seed (simulate)")->capture_default_str();
    app.add_flag("--quiet", opts.quiet, "Suppress progress chatter");

    // simulate
    SynthConfig synth_cfg;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic exam dataset");
    simulate->add_option("--students", synth_cfg.n_students, "Number of students")
        ->capture_default_str();
    simulate->add_option("--items", synth_cfg.n_items, "Number of rubric items")
        ->capture_default_str();
    simulate->add_option("--fn-rate", synth_cfg.fn_rate, "P(AI scores a correct cell 0)")
        ->capture_default_str();
    simulate->add_option("--fp-rate", synth_cfg.fp_rate, "P(AI scores an incorrect cell full)")
        ->capture_default_str();
    simulate
        ->add_option("--partial-rate", synth_cfg.partial_rate,
                     "P(AI gives a correct cell fractional credit)")
        ->capture_default_str();

    // fit
    FitConfig fit_cfg;
    std::string fit_scores, fit_rubric;
    auto* fit = app.add_subcommand("fit", "Estimate 2PL item parameters and abilities");
    fit->add_option("--scores", fit_scores, "Scores CSV")->required();
    fit->add_option("--rubric", fit_rubric, "Rubric CSV")->required();
    fit->add_option("--nodes", fit_cfg.quadrature_nodes, "Quadrature nodes")
        ->capture_default_str();
    fit->add_option("--max-iterations", fit_cfg.max_iterations, "EM iteration cap")
        ->capture_default_str();
    fit->add_option("--tol", fit_cfg.convergence_tol, "Relative log-posterior tolerance")
        ->capture_default_str();

    // filter
    std::string filter_scores, filter_rubric, filter_params;
    double filter_t = 0.0, filter_r = 1.0;
    auto* filter = app.add_subcommand("filter", "Accept or route each AI decision");
    filter->add_option("--scores", filter_scores, "AI scores CSV")->required();
    filter->add_option("--rubric", filter_rubric, "Rubric CSV")->required();
    filter->add_option("--params", filter_params, "Fitted parameters file")->required();
    filter->add_option("--t", filter_t, "Partial-credit threshold")->capture_default_str();
    filter->add_option("--r", filter_r, "Risk tolerance")->capture_default_str();

    // sweep
    std::string sweep_ai, sweep_truth, sweep_rubric, sweep_params;
    std::string sweep_t = "0,0.1,0.25,0.5", sweep_r = "0:1:0.05";
    auto* sweep_cmd = app.add_subcommand("sweep", "Threshold trade-off grid");
    sweep_cmd->add_option("--ai", sweep_ai, "AI scores CSV")->required();
    sweep_cmd->add_option("--truth", sweep_truth, "Ground-truth scores CSV")->required();
    sweep_cmd->add_option("--rubric", sweep_rubric, "Rubric CSV")->required();
    sweep_cmd->add_option("--params", sweep_params, "Fitted parameters file")->required();
    sweep_cmd->add_option("--t-grid", sweep_t, "Credit thresholds (list or start:stop:step)")
        ->capture_default_str();
    sweep_cmd->add_option("--r-grid", sweep_r, "Risk tolerances (list or start:stop:step)")
        ->capture_default_str();

    // report
    std::string report_params, report_decisions, report_ai, report_truth, report_rubric;
    double theta_min = -4.0, theta_max = 4.0, theta_step = 0.1;
    auto* report = app.add_subcommand("report", "Render SVG figures from artifacts");
    report->add_option("--params", report_params, "Parameters file for the ICC figure");
    report->add_option("--decisions", report_decisions, "Decisions CSV for the risk heatmap");
    report->add_option("--ai", report_ai, "AI scores CSV for the scatter figure");
    report->add_option("--truth", report_truth, "Truth scores CSV for the scatter figure");
    report->add_option("--rubric", report_rubric, "Rubric CSV for the scatter figure");
    report->add_option("--theta-min", theta_min, "ICC grid lower bound")->capture_default_str();
    report->add_option("--theta-max", theta_max, "ICC grid upper bound")->capture_default_str();
    report->add_option("--theta-step", theta_step, "ICC grid step")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            synth_cfg.seed = opts.seed;
            return run_simulate(opts, synth_cfg);
        }
        if (fit->parsed()) return run_fit(opts, fit_scores, fit_rubric, fit_cfg);
        if (filter->parsed())
            return run_filter(opts, filter_scores, filter_rubric, filter_params, filter_t,
                              filter_r);
        if (sweep_cmd->parsed())
            return run_sweep(opts, sweep_ai, sweep_truth, sweep_rubric, sweep_params, sweep_t,
                             sweep_r);
        if (report->parsed())
            return run_report(opts, report_params, report_decisions, report_ai, report_truth,
                              report_rubric, theta_min, theta_max, theta_step);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const MalformedCsv& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const UnknownItem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const DuplicateCell& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const OutOfRangeScore& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const RubricMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestion;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
