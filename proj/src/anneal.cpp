#include "galileo/anneal.hpp"

#include "galileo/criteria.hpp"
#include "galileo/density.hpp"
#include "galileo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace galileo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 53-bit uniform in [0, 1); avoids distribution classes so that streams are
// reproducible across standard libraries.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t sample_cumulative(const std::vector<double>& weights, double total, std::mt19937_64& rng) {
    const double target = next_uniform(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    return weights.size() - 1;
}

// Density used for prune ranking; starved or empty components rank last.
double prune_score(const Component& c, PruneMetric metric) {
    if (!(c.effective_size > 0.0)) return kNegInf;
    const DensityReport report = component_density(c);
    return metric == PruneMetric::entropy ? report.density : report.cartesian_density;
}

} // namespace

void prune_components(MixtureModel& model, std::size_t keep, PruneMetric metric) {
    const std::size_t k = model.component_count();
    if (keep >= k) return;
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> score(k);
    for (std::size_t i = 0; i < k; ++i) score[i] = prune_score(model.components[i], metric);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    std::vector<Component> kept;
    kept.reserve(keep);
    double prior_sum = 0.0;
    for (std::size_t r = 0; r < keep; ++r) {
        kept.push_back(std::move(model.components[order[r]]));
        prior_sum += kept.back().prior;
    }
    for (auto& c : kept)
        c.prior = prior_sum > 0.0 ? c.prior / prior_sum : 1.0 / static_cast<double>(keep);
    model.components = std::move(kept);
}

namespace {

double mean_entropy_density(const MixtureModel& model) {
    double acc = 0.0;
    for (const auto& c : model.components) {
        if (!(c.effective_size > 0.0)) continue; // starved: negligible prior
        acc += c.prior * component_density(c).density;
    }
    return acc;
}

} // namespace

std::vector<int> schedule(int k_max, double beta) {
    if (k_max < 1) throw Error("schedule: k_max must be at least 1");
    if (!(beta >= 1.0)) throw Error("schedule: beta must be at least 1");
    std::vector<int> ascending{1};
    double step = 1.0; // beta^i, starting at i = 0
    while (true) {
        const double raw = std::floor(static_cast<double>(ascending.back()) + step);
        if (raw > static_cast<double>(k_max)) break;
        const int next = static_cast<int>(raw);
        if (next > ascending.back()) ascending.push_back(next);
        step *= beta;
    }
    std::reverse(ascending.begin(), ascending.end());
    return ascending;
}

MixtureModel initialize_model(const Dataset& data, int k_max, std::uint64_t seed, bool centers_from_rows) {
    data.validate();
    if (k_max < 1) throw Error("initialize_model: k_max must be at least 1");
    const Schema& schema = data.schema;
    const std::size_t m_count = schema.attribute_count();
    const std::size_t n = data.record_count();
    const double total = data.total_weight();

    // Global per-attribute weighted counts.
    std::vector<std::vector<double>> global(m_count);
    for (std::size_t m = 0; m < m_count; ++m) global[m].assign(schema.cardinality(m), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const double w = data.weight(a);
        for (std::size_t m = 0; m < m_count; ++m) global[m][data.codes[a * m_count + m]] += w;
    }

    std::mt19937_64 rng(seed);
    MixtureModel model;
    model.components.resize(static_cast<std::size_t>(k_max));
    for (auto& c : model.components) {
        c.counts = global;
        c.effective_size = 2.0 * total;
        c.prior = 1.0 / static_cast<double>(k_max);
        if (centers_from_rows) {
            const std::size_t row = std::min(n - 1, static_cast<std::size_t>(next_uniform(rng) * static_cast<double>(n)));
            for (std::size_t m = 0; m < m_count; ++m) c.counts[m][data.codes[row * m_count + m]] += total;
        } else {
            for (std::size_t m = 0; m < m_count; ++m)
                c.counts[m][sample_cumulative(global[m], total, rng)] += total;
        }
    }
    return model;
}

AnnealResult anneal(const Dataset& data, const AnnealConfig& config) {
    data.validate();
    const std::vector<int> levels = schedule(config.k_max, config.beta);
    const double total = data.total_weight();

    MixtureModel model = initialize_model(data, config.k_max, config.seed, config.centers_from_rows);
    if (model.component_count() > static_cast<std::size_t>(levels.front()))
        prune_components(model, static_cast<std::size_t>(levels.front()), config.prune_metric);

    AnnealResult result;
    std::vector<MixtureModel> fitted;
    fitted.reserve(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li) {
        model = fit(std::move(model), data, config.em);

        AnnealLevel level;
        level.k = levels[li];
        level.log_likelihood = model.log_likelihood;
        const std::int64_t dof = degrees_of_freedom(data.schema, static_cast<std::size_t>(levels[li]));
        level.aic = aic(model.log_likelihood, dof);
        level.bic = bic(model.log_likelihood, dof, total);
        level.mean_density = mean_entropy_density(model);
        level.em_iterations = model.em_iterations;
        result.trace.levels.push_back(level);
        fitted.push_back(model);

        if (li + 1 < levels.size())
            prune_components(model, static_cast<std::size_t>(levels[li + 1]), config.prune_metric);
    }

    // Pick the best recorded level; on ties prefer the smaller k.
    std::size_t best = 0;
    for (std::size_t li = 1; li < result.trace.levels.size(); ++li) {
        const AnnealLevel& cand = result.trace.levels[li];
        const AnnealLevel& incumbent = result.trace.levels[best];
        bool better = false;
        switch (config.criterion) {
            case Criterion::aic: better = cand.aic <= incumbent.aic; break;
            case Criterion::bic: better = cand.bic <= incumbent.bic; break;
            case Criterion::density: better = cand.mean_density >= incumbent.mean_density; break;
        }
        if (better) best = li;
    }
    result.trace.selected_k = result.trace.levels[best].k;
    result.model = std::move(fitted[best]);

    // Hard assignments from the stored model; no refit.
    EStepResult posts = e_step(result.model, data, config.em);
    const std::size_t k = result.model.component_count();
    const std::size_t n = data.record_count();
    result.assignment.k = k;
    result.assignment.labels.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double* row = posts.posteriors.data() + a * k;
        result.assignment.labels[a] =
            static_cast<int>(std::max_element(row, row + k) - row);
    }
    result.assignment.posteriors = std::move(posts.posteriors);
    return result;
}

} // namespace galileo
