#include "galileo/em.hpp"

#include "galileo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace galileo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kStarvedFraction = 1e-12;

// Flat (attribute, value) row layout shared by the score table and the
// count accumulators: row r = row_base[m] + v holds k contiguous entries.
struct Layout {
    std::vector<std::size_t> row_base;
    std::size_t rows = 0;

    static Layout of(const Schema& schema) {
        Layout l;
        l.row_base.reserve(schema.attribute_count());
        for (std::size_t m = 0; m < schema.attribute_count(); ++m) {
            l.row_base.push_back(l.rows);
            l.rows += schema.cardinality(m);
        }
        return l;
    }
};

// Per-component log prior and per-(attribute,value) log probability table.
struct Scorer {
    const Layout& layout;
    std::size_t k;
    std::vector<double> log_prior;
    std::vector<double> table; // rows x k

    Scorer(const MixtureModel& model, const Layout& l, const EmConfig& cfg)
        : layout(l), k(model.component_count()), log_prior(k), table(l.rows * k, kNegInf) {
        for (std::size_t i = 0; i < k; ++i) {
            const Component& c = model.components[i];
            log_prior[i] = c.prior > 0.0 ? std::log(c.prior) : kNegInf;
            const double s = component_smoothing(c, cfg);
            for (std::size_t m = 0; m < c.counts.size(); ++m) {
                const auto& col = c.counts[m];
                const double denom = c.effective_size + s * static_cast<double>(col.size());
                if (!(denom > 0.0)) continue; // empty component, rows stay -inf
                for (std::size_t v = 0; v < col.size(); ++v) {
                    const double num = col[v] + s;
                    table[(layout.row_base[m] + v) * k + i] = num > 0.0 ? std::log(num / denom) : kNegInf;
                }
            }
        }
    }

    // acc[i] = log prior_i + sum_m log Pr(record_m | C_i)
    void score(std::span<const Code> record, double* acc) const {
        for (std::size_t i = 0; i < k; ++i) acc[i] = log_prior[i];
        for (std::size_t m = 0; m < record.size(); ++m) {
            const double* row = table.data() + (layout.row_base[m] + record[m]) * k;
            for (std::size_t i = 0; i < k; ++i) acc[i] += row[i];
        }
    }
};

// Log-sum-exp normalization of scores into posteriors. Returns the log
// evidence, or -inf for the degenerate all--inf case (posterior uniform).
double normalize_scores(const double* acc, double* post, std::size_t k) {
    double best = kNegInf;
    for (std::size_t i = 0; i < k; ++i) best = std::max(best, acc[i]);
    if (best == kNegInf) {
        const double u = 1.0 / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) post[i] = u;
        return kNegInf;
    }
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        post[i] = std::exp(acc[i] - best);
        z += post[i];
    }
    const double inv = 1.0 / z;
    for (std::size_t i = 0; i < k; ++i) post[i] *= inv;
    return best + std::log(z);
}

// Contiguous block partition of [0, n) used by both passes; block order is
// the merge order, keeping single-thread runs bit-identical.
std::vector<std::pair<std::size_t, std::size_t>> blocks_of(std::size_t n, int threads) {
    const std::size_t nt = std::max(1, threads);
    const std::size_t count = std::min<std::size_t>(nt, n > 0 ? n : 1);
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    blocks.reserve(count);
    for (std::size_t b = 0; b < count; ++b)
        blocks.emplace_back(n * b / count, n * (b + 1) / count);
    return blocks;
}

template <typename Fn>
void run_blocks(const std::vector<std::pair<std::size_t, std::size_t>>& blocks, Fn&& fn) {
    if (blocks.size() == 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) pool.emplace_back([&fn, b] { fn(b); });
    for (auto& t : pool) t.join();
}

// One fused E+M accumulation pass: log-likelihood of the current model and
// the posterior-weighted counts that define the next one.
struct PassResult {
    double log_likelihood = 0.0;
    std::vector<double> counts; // rows x k
    std::vector<double> sizes;  // k
    bool degenerate = false;
};

PassResult fused_pass(const Scorer& scorer, const Dataset& data, int threads) {
    const std::size_t n = data.record_count();
    const std::size_t m_count = data.schema.attribute_count();
    const std::size_t k = scorer.k;
    const auto blocks = blocks_of(n, threads);

    std::vector<PassResult> partial(blocks.size());
    run_blocks(blocks, [&](std::size_t b) {
        PassResult& out = partial[b];
        out.counts.assign(scorer.layout.rows * k, 0.0);
        out.sizes.assign(k, 0.0);
        std::vector<double> acc(k), post(k);
        for (std::size_t a = blocks[b].first; a < blocks[b].second; ++a) {
            const Code* rec = data.codes.data() + a * m_count;
            scorer.score({rec, m_count}, acc.data());
            const double le = normalize_scores(acc.data(), post.data(), k);
            const double w = data.weight(a);
            if (le == kNegInf)
                out.degenerate = true;
            out.log_likelihood += w * le;
            for (std::size_t i = 0; i < k; ++i) {
                post[i] *= w;
                out.sizes[i] += post[i];
            }
            for (std::size_t m = 0; m < m_count; ++m) {
                double* row = out.counts.data() + (scorer.layout.row_base[m] + rec[m]) * k;
                for (std::size_t i = 0; i < k; ++i) row[i] += post[i];
            }
        }
    });

    PassResult total = std::move(partial[0]);
    for (std::size_t b = 1; b < partial.size(); ++b) {
        total.log_likelihood += partial[b].log_likelihood;
        total.degenerate = total.degenerate || partial[b].degenerate;
        for (std::size_t r = 0; r < total.counts.size(); ++r) total.counts[r] += partial[b].counts[r];
        for (std::size_t i = 0; i < k; ++i) total.sizes[i] += partial[b].sizes[i];
    }
    return total;
}

void check_model_schema(const MixtureModel& model, const Schema& schema) {
    for (const Component& c : model.components) {
        if (c.counts.size() != schema.attribute_count())
            throw Error("em: model and dataset attribute counts differ");
        for (std::size_t m = 0; m < c.counts.size(); ++m)
            if (c.counts[m].size() != schema.cardinality(m))
                throw Error("em: component cardinality differs from schema for attribute '" +
                            schema.attribute(m).name + "'");
    }
}

// Rebuilds the model's components from flat accumulators.
void apply_counts(MixtureModel& model, const Layout& layout, const Schema& schema, const PassResult& pass) {
    const std::size_t k = model.component_count();
    double total = 0.0;
    for (double s : pass.sizes) total += s;
    for (std::size_t i = 0; i < k; ++i) {
        Component& c = model.components[i];
        c.effective_size = pass.sizes[i];
        c.prior = total > 0.0 ? pass.sizes[i] / total : 1.0 / static_cast<double>(k);
        c.counts.resize(schema.attribute_count());
        for (std::size_t m = 0; m < schema.attribute_count(); ++m) {
            const std::size_t card = schema.cardinality(m);
            c.counts[m].resize(card);
            for (std::size_t v = 0; v < card; ++v)
                c.counts[m][v] = pass.counts[(layout.row_base[m] + v) * k + i];
        }
    }
}

} // namespace

double component_smoothing(const Component& c, const EmConfig& config) {
    if (config.smoothing) {
        if (*config.smoothing < 0.0) throw Error("em: smoothing must be nonnegative");
        return *config.smoothing;
    }
    return 1e-9 * c.effective_size;
}

bool is_starved(const Component& c, double total_weight) {
    return c.effective_size < kStarvedFraction * total_weight;
}

EStepResult e_step(const MixtureModel& model, const Dataset& data, const EmConfig& config) {
    model.validate();
    data.validate();
    check_model_schema(model, data.schema);
    const std::size_t n = data.record_count();
    const std::size_t k = model.component_count();
    const Layout layout = Layout::of(data.schema);
    const Scorer scorer(model, layout, config);

    EStepResult result;
    result.posteriors.resize(n * k);
    const auto blocks = blocks_of(n, config.threads);
    std::vector<double> block_ll(blocks.size(), 0.0);
    std::vector<char> block_degenerate(blocks.size(), 0);
    run_blocks(blocks, [&](std::size_t b) {
        std::vector<double> acc(k);
        for (std::size_t a = blocks[b].first; a < blocks[b].second; ++a) {
            scorer.score(data.record(a), acc.data());
            const double le = normalize_scores(acc.data(), result.posteriors.data() + a * k, k);
            if (le == kNegInf) block_degenerate[b] = 1;
            block_ll[b] += data.weight(a) * le;
        }
    });
    result.log_likelihood = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        result.log_likelihood += block_ll[b];
        result.degenerate = result.degenerate || block_degenerate[b] != 0;
    }
    return result;
}

MixtureModel m_step(std::span<const double> posteriors, std::size_t k, const Dataset& data) {
    data.validate();
    const std::size_t n = data.record_count();
    const std::size_t m_count = data.schema.attribute_count();
    if (k < 1) throw Error("m_step: k must be at least 1");
    if (posteriors.size() != n * k) throw Error("m_step: posterior matrix shape mismatch");

    const Layout layout = Layout::of(data.schema);
    PassResult pass;
    pass.counts.assign(layout.rows * k, 0.0);
    pass.sizes.assign(k, 0.0);
    std::vector<double> post(k);
    for (std::size_t a = 0; a < n; ++a) {
        const double w = data.weight(a);
        const Code* rec = data.codes.data() + a * m_count;
        for (std::size_t i = 0; i < k; ++i) {
            post[i] = w * posteriors[a * k + i];
            pass.sizes[i] += post[i];
        }
        for (std::size_t m = 0; m < m_count; ++m) {
            double* row = pass.counts.data() + (layout.row_base[m] + rec[m]) * k;
            for (std::size_t i = 0; i < k; ++i) row[i] += post[i];
        }
    }

    MixtureModel model;
    model.components.resize(k);
    apply_counts(model, layout, data.schema, pass);
    return model;
}

MixtureModel fit(MixtureModel model, const Dataset& data, const EmConfig& config) {
    model.validate();
    data.validate();
    check_model_schema(model, data.schema);
    if (config.max_iterations < 1) throw Error("em: max_iterations must be at least 1");
    if (!(config.rel_tolerance > 0.0)) throw Error("em: rel_tolerance must be positive");
    const Layout layout = Layout::of(data.schema);

    double previous = kNegInf;
    int m_steps = 0;
    for (;;) {
        const Scorer scorer(model, layout, config);
        PassResult pass = fused_pass(scorer, data, config.threads);
        model.log_likelihood = pass.log_likelihood;
        const double change = std::abs(pass.log_likelihood - previous) / (std::abs(pass.log_likelihood) + 1.0);
        if (change < config.rel_tolerance) {
            model.converged = true;
            break;
        }
        if (m_steps >= config.max_iterations) {
            model.converged = false;
            break;
        }
        apply_counts(model, layout, data.schema, pass);
        previous = pass.log_likelihood;
        ++m_steps;
    }
    model.em_iterations = m_steps;
    return model;
}

} // namespace galileo
