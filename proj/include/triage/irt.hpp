#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "triage/types.hpp"

namespace triage {

/// 2PL item characteristic curve: probability of success at ability theta
/// for an item with discrimination a and difficulty b. Result is clamped
/// into the open unit interval so callers can take logs of p and 1-p.
double icc(double a, double b, double theta);

struct FitConfig {
    int quadrature_nodes = 41;
    double quadrature_limit = 5.0;  // ability grid spans [-limit, limit]
    int max_iterations = 500;
    double convergence_tol = 1e-6;  // relative log-posterior change

    // MAP priors: log a ~ N(location, scale), b ~ N(mean, sd).
    double prior_log_a_location = 0.0;
    double prior_log_a_scale = 1.0;
    double prior_b_mean = 0.0;
    double prior_b_sd = 2.0;

    // Box constraints enforced during the M-step.
    double a_min = 0.01;
    double a_max = 20.0;
    double b_min = -10.0;
    double b_max = 10.0;

    void validate() const;
};

struct FitResult {
    std::vector<ItemParams> items;  // rubric order
    AbilityEstimates abilities;     // matrix student order, EAP estimates
    double final_log_posterior = 0.0;
    int iterations_used = 0;
    bool converged = false;
    std::vector<double> log_posterior_trace;  // one entry per EM iteration
};

/// Marginal-likelihood EM fit of the 2PL model with a standard-normal
/// ability population and MAP priors on the item parameters. Fractional
/// scores contribute s*log(p) + (1-s)*log(1-p); missing cells are excluded
/// from the likelihood. Deterministic for fixed inputs and config.
FitResult fit_2pl(const ScoreMatrix& matrix, const FitConfig& config = {});

struct ProbabilityMatrix {
    std::vector<std::string> students;
    std::vector<std::string> items;
    std::vector<double> p;  // row-major students x items
    double at(std::size_t i, std::size_t j) const { return p[i * items.size() + j]; }
};

/// Model-expected normalized score for every (student, item) of `matrix`.
ProbabilityMatrix expected_scores(const FitResult& fit, const ScoreMatrix& matrix);

struct CurveTable {
    std::vector<double> theta_grid;
    std::vector<std::string> item_ids;
    std::vector<std::vector<double>> columns;  // per item, p over the grid
};

/// Backing data for an item-characteristic-curve figure.
CurveTable sample_icc_curves(const FitResult& fit, const std::vector<double>& theta_grid);

namespace irt_detail {

struct QuadratureGrid {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // normal-population weights, sum to 1
};

/// Gauss-Legendre rule on [-limit, limit] with the standard normal density
/// folded into the weights, then normalized.
QuadratureGrid ability_grid(int n_nodes, double limit);

/// Expected per-node response tables for one item, produced by the E-step:
/// weight[q] is the posterior mass at node q of students who saw the item,
/// credit[q] the mass-weighted normalized score.
struct ItemTables {
    std::vector<double> credit;  // sum_i h_iq * s_ij
    std::vector<double> weight;  // sum_i h_iq
};

/// Penalized expected complete-data log-likelihood for one item (the
/// M-step objective), including the MAP prior terms, up to constants.
double item_objective(const ItemTables& tables, const QuadratureGrid& grid,
                      const FitConfig& config, double a, double b);

/// Analytic gradient of item_objective with respect to (a, b).
std::pair<double, double> item_gradient(const ItemTables& tables, const QuadratureGrid& grid,
                                        const FitConfig& config, double a, double b);

/// One E-step at the given parameters; exposed for tests.
struct EStepResult {
    std::vector<ItemTables> tables;  // per item
    std::vector<double> eap;         // per student
    double marginal_log_likelihood = 0.0;
};
EStepResult e_step(const ScoreMatrix& matrix, const QuadratureGrid& grid,
                   const std::vector<ItemParams>& items);

}  // namespace irt_detail

}  // namespace triage
