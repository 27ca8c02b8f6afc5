#include "triage/irt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "triage/errors.hpp"

namespace triage {

namespace {

// Smallest probability the model ever reports; keeps log(p), log(1-p) and
// risk values finite for any in-range parameters.
constexpr double kProbFloor = 1e-15;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

// log(1 + exp(x)) without overflow.
double softplus(double x) {
    if (x > 36.0) return x;
    if (x < -36.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

struct LogProb {
    double lp1;  // log p
    double lp0;  // log (1 - p)
};

LogProb log_icc(double a, double b, double theta) {
    double z = a * (theta - b);
    return {-softplus(-z), -softplus(z)};
}

double log_prior(const FitConfig& cfg, double a, double b) {
    double la = (std::log(a) - cfg.prior_log_a_location) / cfg.prior_log_a_scale;
    double lb = (b - cfg.prior_b_mean) / cfg.prior_b_sd;
    return -std::log(a) - 0.5 * la * la - 0.5 * lb * lb;
}

}  // namespace

double icc(double a, double b, double theta) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(theta))
        throw NonFiniteInput("icc requires finite a, b, theta");
    double z = a * (theta - b);
    double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    return clamp_prob(p);
}

void FitConfig::validate() const {
    if (quadrature_nodes < 11) throw InvalidConfig("quadrature_nodes must be >= 11");
    if (!(quadrature_limit > 0.0)) throw InvalidConfig("quadrature_limit must be positive");
    if (max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
    if (!(convergence_tol > 0.0)) throw InvalidConfig("convergence_tol must be positive");
    if (!(prior_log_a_scale > 0.0) || !(prior_b_sd > 0.0))
        throw InvalidConfig("prior scales must be positive");
    if (!(a_min > 0.0) || !(a_max > a_min) || !(b_max > b_min))
        throw InvalidConfig("parameter bounds are inconsistent");
}

namespace irt_detail {

QuadratureGrid ability_grid(int n_nodes, double limit) {
    // Legendre nodes on (-1, 1) by Newton iteration on P_n.
    const int n = n_nodes;
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double xi = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int m = 2; m <= n; ++m) {
                double p2 = ((2.0 * m - 1.0) * xi * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double wk = 2.0 / ((1.0 - xi * xi) * dp * dp);
        x[static_cast<std::size_t>(k)] = -xi;  // ascending from the left end
        w[static_cast<std::size_t>(k)] = wk;
        x[static_cast<std::size_t>(n - 1 - k)] = xi;
        w[static_cast<std::size_t>(n - 1 - k)] = wk;
    }

    QuadratureGrid grid;
    grid.nodes.resize(static_cast<std::size_t>(n));
    grid.weights.resize(static_cast<std::size_t>(n));
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double total = 0.0;
    for (int q = 0; q < n; ++q) {
        auto qi = static_cast<std::size_t>(q);
        double theta = limit * x[qi];
        double weight = limit * w[qi] * inv_sqrt_2pi * std::exp(-0.5 * theta * theta);
        grid.nodes[qi] = theta;
        grid.weights[qi] = weight;
        total += weight;
    }
    for (double& weight : grid.weights) weight /= total;
    return grid;
}

EStepResult e_step(const ScoreMatrix& matrix, const QuadratureGrid& grid,
                   const std::vector<ItemParams>& items) {
    const std::size_t n_students = matrix.n_students();
    const std::size_t n_items = matrix.n_items();
    const std::size_t n_nodes = grid.nodes.size();

    // Per item and node: log p, log(1-p) at the current parameters.
    std::vector<double> lp1(n_items * n_nodes), lp0(n_items * n_nodes);
    for (std::size_t j = 0; j < n_items; ++j)
        for (std::size_t q = 0; q < n_nodes; ++q) {
            auto lp = log_icc(items[j].a, items[j].b, grid.nodes[q]);
            lp1[j * n_nodes + q] = lp.lp1;
            lp0[j * n_nodes + q] = lp.lp0;
        }

    std::vector<double> log_weight(n_nodes);
    for (std::size_t q = 0; q < n_nodes; ++q) log_weight[q] = std::log(grid.weights[q]);

    EStepResult out;
    out.tables.assign(n_items, ItemTables{std::vector<double>(n_nodes, 0.0),
                                          std::vector<double>(n_nodes, 0.0)});
    out.eap.assign(n_students, 0.0);

    std::vector<double> post(n_nodes);
    for (std::size_t i = 0; i < n_students; ++i) {
        for (std::size_t q = 0; q < n_nodes; ++q) post[q] = log_weight[q];
        for (std::size_t j = 0; j < n_items; ++j) {
            if (!matrix.has_cell(i, j)) continue;
            double s = matrix.normalized(i, j);
            const double* l1 = &lp1[j * n_nodes];
            const double* l0 = &lp0[j * n_nodes];
            for (std::size_t q = 0; q < n_nodes; ++q)
                post[q] += s * l1[q] + (1.0 - s) * l0[q];
        }
        double peak = *std::max_element(post.begin(), post.end());
        double norm = 0.0;
        for (std::size_t q = 0; q < n_nodes; ++q) {
            post[q] = std::exp(post[q] - peak);
            norm += post[q];
        }
        out.marginal_log_likelihood += peak + std::log(norm);
        double eap = 0.0;
        for (std::size_t q = 0; q < n_nodes; ++q) {
            post[q] /= norm;
            eap += post[q] * grid.nodes[q];
        }
        out.eap[i] = eap;
        for (std::size_t j = 0; j < n_items; ++j) {
            if (!matrix.has_cell(i, j)) continue;
            double s = matrix.normalized(i, j);
            auto& table = out.tables[j];
            for (std::size_t q = 0; q < n_nodes; ++q) {
                table.credit[q] += post[q] * s;
                table.weight[q] += post[q];
            }
        }
    }
    return out;
}

double item_objective(const ItemTables& tables, const QuadratureGrid& grid,
                      const FitConfig& config, double a, double b) {
    double ll = 0.0;
    for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
        auto lp = log_icc(a, b, grid.nodes[q]);
        ll += tables.credit[q] * lp.lp1 + (tables.weight[q] - tables.credit[q]) * lp.lp0;
    }
    return ll + log_prior(config, a, b);
}

std::pair<double, double> item_gradient(const ItemTables& tables, const QuadratureGrid& grid,
                                        const FitConfig& config, double a, double b) {
    double g_a = 0.0, g_b = 0.0;
    for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
        double p = icc(a, b, grid.nodes[q]);
        double resid = tables.credit[q] - tables.weight[q] * p;
        g_a += resid * (grid.nodes[q] - b);
        g_b -= resid;
    }
    g_b *= a;
    // Prior terms.
    double la = (std::log(a) - config.prior_log_a_location) /
                (config.prior_log_a_scale * config.prior_log_a_scale);
    g_a += (-1.0 - la) / a;
    g_b -= (b - config.prior_b_mean) / (config.prior_b_sd * config.prior_b_sd);
    return {g_a, g_b};
}

namespace {

// M-step update of one item: Newton iterations on (log a, b) with step
// halving, projected into the configured box. Falls back to bisection on
// the b gradient plus a halved gradient step on log a when the Hessian is
// not negative-definite. Only improving steps are accepted, so the EM
// objective never decreases.
ItemParams maximize_item(const ItemTables& tables, const QuadratureGrid& grid,
                         const FitConfig& cfg, ItemParams start) {
    const double alpha_min = std::log(cfg.a_min), alpha_max = std::log(cfg.a_max);
    const std::size_t n_nodes = grid.nodes.size();

    double alpha = std::clamp(std::log(start.a), alpha_min, alpha_max);
    double b = std::clamp(start.b, cfg.b_min, cfg.b_max);
    double best = item_objective(tables, grid, cfg, std::exp(alpha), b);

    for (int iter = 0; iter < 60; ++iter) {
        double a = std::exp(alpha);
        auto [g_a, g_b] = item_gradient(tables, grid, cfg, a, b);
        double g_alpha = a * g_a;

        // Hessian of the data term in (alpha, b).
        double e_aa = 0.0, e_ab = 0.0, e_bb = 0.0, e_ga = 0.0;
        for (std::size_t q = 0; q < n_nodes; ++q) {
            double p = icc(a, b, grid.nodes[q]);
            double v = tables.weight[q] * p * (1.0 - p);
            double d = grid.nodes[q] - b;
            double resid = tables.credit[q] - tables.weight[q] * p;
            e_aa -= v * d * d;
            e_ab += a * v * d - resid;
            e_bb -= a * a * v;
            e_ga += resid * d;
        }
        double sa2 = cfg.prior_log_a_scale * cfg.prior_log_a_scale;
        double sb2 = cfg.prior_b_sd * cfg.prior_b_sd;
        double h_aa = a * a * e_aa + a * e_ga - 1.0 / sa2;
        double h_ab = a * e_ab;
        double h_bb = e_bb - 1.0 / sb2;

        double step_alpha, step_b;
        double det = h_aa * h_bb - h_ab * h_ab;
        if (h_aa < 0.0 && det > 0.0) {
            step_alpha = -(h_bb * g_alpha - h_ab * g_b) / det;
            step_b = -(h_aa * g_b - h_ab * g_alpha) / det;
        } else {
            // Bisection target for b: the b gradient is decreasing in b.
            double lo = cfg.b_min, hi = cfg.b_max;
            double g_lo = item_gradient(tables, grid, cfg, a, lo).second;
            double g_hi = item_gradient(tables, grid, cfg, a, hi).second;
            double b_star;
            if (g_lo <= 0.0)
                b_star = lo;
            else if (g_hi >= 0.0)
                b_star = hi;
            else {
                for (int k = 0; k < 80; ++k) {
                    double mid = 0.5 * (lo + hi);
                    if (item_gradient(tables, grid, cfg, a, mid).second > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                b_star = 0.5 * (lo + hi);
            }
            step_alpha = std::clamp(g_alpha, -1.0, 1.0);
            step_b = b_star - b;
        }

        bool accepted = false;
        double scale = 1.0;
        for (int h = 0; h < 40; ++h, scale *= 0.5) {
            double cand_alpha = std::clamp(alpha + scale * step_alpha, alpha_min, alpha_max);
            double cand_b = std::clamp(b + scale * step_b, cfg.b_min, cfg.b_max);
            double val = item_objective(tables, grid, cfg, std::exp(cand_alpha), cand_b);
            if (val > best) {
                double moved = std::abs(cand_alpha - alpha) + std::abs(cand_b - b);
                alpha = cand_alpha;
                b = cand_b;
                best = val;
                accepted = true;
                if (moved < 1e-12) iter = 60;  // converged
                break;
            }
        }
        if (!accepted) break;  // no improving step; keep current maximizer
    }
    return {std::move(start.item_id), std::exp(alpha), b};
}

}  // namespace

}  // namespace irt_detail

FitResult fit_2pl(const ScoreMatrix& matrix, const FitConfig& config) {
    config.validate();
    const std::size_t n_students = matrix.n_students();
    const std::size_t n_items = matrix.n_items();
    if (n_students < 2 || n_items < 2)
        throw DegenerateMatrix("fit requires at least 2 students and 2 items");

    // Every student and item must contribute at least one cell.
    std::vector<std::size_t> item_counts(n_items, 0);
    for (std::size_t i = 0; i < n_students; ++i) {
        std::size_t row = 0;
        for (std::size_t j = 0; j < n_items; ++j)
            if (matrix.has_cell(i, j)) {
                ++row;
                ++item_counts[j];
            }
        if (row == 0)
            throw DegenerateMatrix("student '" + matrix.students()[i] + "' has no cells");
    }
    for (std::size_t j = 0; j < n_items; ++j)
        if (item_counts[j] == 0)
            throw DegenerateMatrix("item '" + matrix.rubric().item(j).id + "' has no cells");

    auto grid = irt_detail::ability_grid(config.quadrature_nodes, config.quadrature_limit);

    // Start values: a = 1, b = logit of the (clamped) item mean.
    std::vector<ItemParams> items;
    items.reserve(n_items);
    for (std::size_t j = 0; j < n_items; ++j) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < n_students; ++i)
            if (matrix.has_cell(i, j)) {
                sum += matrix.normalized(i, j);
                ++cnt;
            }
        double mean = std::clamp(sum / static_cast<double>(cnt), 0.01, 0.99);
        double b0 = std::clamp(std::log((1.0 - mean) / mean), config.b_min, config.b_max);
        items.push_back({matrix.rubric().item(j).id, 1.0, b0});
    }

    FitResult result;
    std::vector<double> eap(n_students, 0.0);
    double prev_lp = 0.0;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        auto estep = irt_detail::e_step(matrix, grid, items);
        double lp = estep.marginal_log_likelihood;
        for (const auto& item : items) lp += log_prior(config, item.a, item.b);
        result.log_posterior_trace.push_back(lp);
        eap = std::move(estep.eap);
        result.iterations_used = iter;
        result.final_log_posterior = lp;
        if (iter > 1 && std::abs(lp - prev_lp) <= config.convergence_tol * std::max(1.0, std::abs(prev_lp))) {
            result.converged = true;
            break;
        }
        prev_lp = lp;
        if (iter == config.max_iterations) break;
        for (std::size_t j = 0; j < n_items; ++j)
            items[j] = irt_detail::maximize_item(estep.tables[j], grid, config, std::move(items[j]));
    }

    result.items = std::move(items);
    result.abilities = AbilityEstimates(matrix.students(), std::move(eap));
    return result;
}

ProbabilityMatrix expected_scores(const FitResult& fit, const ScoreMatrix& matrix) {
    ProbabilityMatrix out;
    out.students = matrix.students();
    out.items.reserve(matrix.n_items());
    std::vector<const ItemParams*> params;
    for (std::size_t j = 0; j < matrix.n_items(); ++j) {
        const std::string& id = matrix.rubric().item(j).id;
        const ItemParams* found = nullptr;
        for (const auto& item : fit.items)
            if (item.item_id == id) {
                found = &item;
                break;
            }
        if (!found) throw CoverageGap("item '" + id + "' absent from fit");
        params.push_back(found);
        out.items.push_back(id);
    }
    out.p.reserve(matrix.n_students() * matrix.n_items());
    for (const auto& student : matrix.students()) {
        auto theta = fit.abilities.theta_of(student);
        if (!theta) throw CoverageGap("student '" + student + "' absent from fit");
        for (const ItemParams* item : params) out.p.push_back(icc(item->a, item->b, *theta));
    }
    return out;
}

CurveTable sample_icc_curves(const FitResult& fit, const std::vector<double>& theta_grid) {
    if (theta_grid.empty()) throw EmptyGrid("theta grid is empty");
    if (!std::is_sorted(theta_grid.begin(), theta_grid.end()))
        throw InvalidConfig("theta grid must be sorted ascending");
    CurveTable out;
    out.theta_grid = theta_grid;
    for (const auto& item : fit.items) {
        out.item_ids.push_back(item.item_id);
        std::vector<double> column;
        column.reserve(theta_grid.size());
        for (double theta : theta_grid) column.push_back(icc(item.a, item.b, theta));
        out.columns.push_back(std::move(column));
    }
    return out;
}

}  // namespace triage
