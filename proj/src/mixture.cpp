#include "galileo/mixture.hpp"

#include "galileo/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace galileo {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double component_probability(const Component& c, std::size_t m, Code v, double smoothing) {
    if (m >= c.counts.size())
        throw Error("component_probability: attribute index " + std::to_string(m) + " out of range");
    const auto& col = c.counts[m];
    if (v >= col.size())
        throw Error("component_probability: code " + std::to_string(v) + " out of range for attribute " +
                    std::to_string(m));
    const double denom = c.effective_size + smoothing * static_cast<double>(col.size());
    if (!(denom > 0.0))
        throw Error("component_probability: empty component and zero smoothing");
    return (col[v] + smoothing) / denom;
}

double record_log_likelihood(const Component& c, std::span<const Code> record, double smoothing) {
    if (record.size() != c.counts.size())
        throw Error("record_log_likelihood: record length does not match component");
    double acc = 0.0;
    for (std::size_t m = 0; m < record.size(); ++m) {
        const double p = component_probability(c, m, record[m], smoothing);
        if (p <= 0.0) return kNegInf;
        acc += std::log(p);
    }
    return acc;
}

void MixtureModel::validate() const {
    if (components.empty()) throw Error("mixture: at least one component required");
    double sum = 0.0;
    for (const auto& c : components) sum += c.prior;
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("mixture: priors sum to " + std::to_string(sum) + ", expected 1");
}

Posterior posterior(const MixtureModel& model, std::span<const Code> record, double smoothing) {
    const std::size_t k = model.component_count();
    std::vector<double> score(k);
    double best = kNegInf;
    for (std::size_t i = 0; i < k; ++i) {
        const Component& c = model.components[i];
        const double lp = c.prior > 0.0 ? std::log(c.prior) + record_log_likelihood(c, record, smoothing) : kNegInf;
        score[i] = lp;
        if (lp > best) best = lp;
    }
    Posterior out{std::vector<double>(k), kNegInf, false};
    if (best == kNegInf) {
        // Degenerate evidence: no component admits the record.
        for (auto& p : out.probabilities) p = 1.0 / static_cast<double>(k);
        out.degenerate = true;
        return out;
    }
    double z = 0.0;
    for (std::size_t i = 0; i < k; ++i) z += std::exp(score[i] - best);
    out.log_evidence = best + std::log(z);
    for (std::size_t i = 0; i < k; ++i) out.probabilities[i] = std::exp(score[i] - best) / z;
    return out;
}

} // namespace galileo
