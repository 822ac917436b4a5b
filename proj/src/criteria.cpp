#include "galileo/criteria.hpp"

#include "galileo/error.hpp"

#include <cmath>
#include <vector>

namespace galileo {

std::int64_t degrees_of_freedom(const Schema& schema, std::size_t k) {
    if (k < 1) throw Error("degrees_of_freedom: k must be at least 1");
    std::int64_t cells = 0;
    for (std::size_t m = 0; m < schema.attribute_count(); ++m)
        cells += static_cast<std::int64_t>(schema.cardinality(m)) - 1;
    return static_cast<std::int64_t>(k) - 1 + static_cast<std::int64_t>(k) * cells;
}

double aic(double log_likelihood, std::int64_t dof) {
    return 2.0 * static_cast<double>(dof) - 2.0 * log_likelihood;
}

double bic(double log_likelihood, std::int64_t dof, double n) {
    if (!(n >= 1.0)) throw Error("bic: n must be at least 1");
    return std::log(n) * static_cast<double>(dof) - 2.0 * log_likelihood;
}

double category_utility(const ClusterAssignment& assignment, const Dataset& data) {
    const std::size_t n = data.record_count();
    const std::size_t m_count = data.schema.attribute_count();
    const std::size_t k = assignment.k;
    if (assignment.labels.size() != n)
        throw Error("category_utility: assignment does not cover the dataset");
    if (k < 1) throw Error("category_utility: k must be at least 1");

    const double w_total = data.total_weight();
    std::vector<double> cluster_weight(k, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const int label = assignment.labels[a];
        if (label < 0 || static_cast<std::size_t>(label) >= k)
            throw Error("category_utility: label out of range");
        cluster_weight[static_cast<std::size_t>(label)] += data.weight(a);
    }

    double total = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
        const std::size_t card = data.schema.cardinality(m);
        // Joint weighted counts over (cluster, value) for this attribute.
        std::vector<double> joint(k * card, 0.0);
        std::vector<double> marginal(card, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            const double w = data.weight(a);
            const Code v = data.codes[a * m_count + m];
            joint[static_cast<std::size_t>(assignment.labels[a]) * card + v] += w;
            marginal[v] += w;
        }
        double marginal_sq = 0.0;
        for (std::size_t v = 0; v < card; ++v) {
            const double p = marginal[v] / w_total;
            marginal_sq += p * p;
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (cluster_weight[i] <= 0.0) continue;
            double conditional_sq = 0.0;
            for (std::size_t v = 0; v < card; ++v) {
                const double p = joint[i * card + v] / cluster_weight[i];
                conditional_sq += p * p;
            }
            total += (cluster_weight[i] / w_total) * (conditional_sq - marginal_sq);
        }
    }
    return total / static_cast<double>(k);
}

} // namespace galileo
