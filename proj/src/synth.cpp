#include "triage/synth.hpp"

#include <cmath>
#include <cstdio>

#include "triage/errors.hpp"
#include "triage/irt.hpp"
#include "triage/rng.hpp"

namespace triage {

namespace {

std::string padded_id(char prefix, std::size_t index, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, index + 1);
    return buf;
}

int id_width(int count) {
    int width = 1;
    for (int v = count; v >= 10; v /= 10) ++width;
    return width;
}

}  // namespace

void SynthConfig::validate() const {
    if (n_students < 1) throw InvalidConfig("n_students must be positive");
    if (items.empty() && n_items < 1) throw InvalidConfig("n_items must be positive");
    for (const auto& item : items)
        if (!(item.max_points > 0.0) || !(item.a_true > 0.0) || !std::isfinite(item.b_true))
            throw InvalidConfig("invalid explicit item spec '" + item.id + "'");
    if (items.empty()) {
        if (!(a_low > 0.0 && a_high >= a_low)) throw InvalidConfig("bad discrimination range");
        if (!(b_high >= b_low)) throw InvalidConfig("bad difficulty range");
        if (!(last_item_max_points > 0.0)) throw InvalidConfig("bad last_item_max_points");
    }
    for (double rate : {fn_rate, fp_rate, partial_rate})
        if (!(rate >= 0.0 && rate < 1.0)) throw InvalidConfig("error rates must be in [0,1)");
    if (fn_rate + partial_rate > 1.0)
        throw InvalidConfig("fn_rate + partial_rate must not exceed 1");
}

SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    using namespace synth_streams;

    std::vector<SynthItemSpec> items = cfg.items;
    if (items.empty()) {
        items.reserve(static_cast<std::size_t>(cfg.n_items));
        const double log_a_low = std::log(cfg.a_low);
        const double log_a_span = std::log(cfg.a_high) - log_a_low;
        int width = id_width(cfg.n_items);
        for (std::size_t j = 0; j < static_cast<std::size_t>(cfg.n_items); ++j) {
            double ua = rng::uniform01(rng::key_bits(cfg.seed, kItemA, j));
            double ub = rng::uniform01(rng::key_bits(cfg.seed, kItemB, j));
            SynthItemSpec spec;
            spec.id = padded_id('i', j, width);
            spec.max_points =
                (j + 1 == static_cast<std::size_t>(cfg.n_items)) ? cfg.last_item_max_points : 1.0;
            spec.a_true = std::exp(log_a_low + ua * log_a_span);
            spec.b_true = cfg.b_low + ub * (cfg.b_high - cfg.b_low);
            items.push_back(std::move(spec));
        }
    }

    std::vector<RubricItem> rubric_items;
    rubric_items.reserve(items.size());
    for (const auto& item : items) rubric_items.push_back({item.id, item.max_points});
    RubricSpec rubric(std::move(rubric_items));

    const auto n_students = static_cast<std::size_t>(cfg.n_students);
    int swidth = id_width(cfg.n_students);
    std::vector<std::string> students;
    students.reserve(n_students);
    std::vector<double> theta(n_students);
    for (std::size_t i = 0; i < n_students; ++i) {
        students.push_back(padded_id('s', i, swidth));
        theta[i] = rng::normal_quantile(rng::uniform01_open(rng::key_bits(cfg.seed, kAbility, i)));
    }

    std::vector<CellValue> truth_cells, ai_cells;
    truth_cells.reserve(n_students * items.size());
    ai_cells.reserve(n_students * items.size());
    for (std::size_t i = 0; i < n_students; ++i) {
        for (std::size_t j = 0; j < items.size(); ++j) {
            const auto& item = items[j];
            double p = icc(item.a_true, item.b_true, theta[i]);
            bool correct = rng::uniform01(rng::key_bits(cfg.seed, kTruth, i, j)) < p;
            double truth_raw = correct ? item.max_points : 0.0;

            double ai_raw;
            double u = rng::uniform01(rng::key_bits(cfg.seed, kAiError, i, j));
            if (correct) {
                if (u < cfg.fn_rate) {
                    ai_raw = 0.0;
                } else if (u < cfg.fn_rate + cfg.partial_rate) {
                    double uf = rng::uniform01(rng::key_bits(cfg.seed, kAiFraction, i, j));
                    int pick = uf < 1.0 / 3.0 ? 1 : (uf < 2.0 / 3.0 ? 2 : 3);
                    ai_raw = 0.25 * pick * item.max_points;
                } else {
                    ai_raw = item.max_points;
                }
            } else {
                ai_raw = u < cfg.fp_rate ? item.max_points : 0.0;
            }
            truth_cells.push_back({students[i], item.id, truth_raw});
            ai_cells.push_back({students[i], item.id, ai_raw});
        }
    }

    return SynthData{ScoreMatrix(students, rubric, truth_cells),
                     ScoreMatrix(students, rubric, ai_cells), std::move(items),
                     std::move(theta)};
}

}  // namespace triage
