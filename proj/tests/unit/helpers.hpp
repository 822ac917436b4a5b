#pragma once

#include "galileo/mixture.hpp"
#include "galileo/schema.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace galileo::test {

/// Schema with attribute m named "a<m>" and values "v0", "v1", ...
inline Schema make_schema(const std::vector<std::size_t>& cardinalities) {
    std::vector<AttributeSpec> attrs(cardinalities.size());
    for (std::size_t m = 0; m < cardinalities.size(); ++m) {
        attrs[m].name = "a" + std::to_string(m);
        for (std::size_t v = 0; v < cardinalities[m]; ++v) attrs[m].values.push_back("v" + std::to_string(v));
    }
    return Schema(std::move(attrs));
}

inline Dataset make_dataset(const std::vector<std::size_t>& cardinalities,
                            const std::vector<std::vector<Code>>& rows,
                            std::vector<double> weights = {}) {
    Dataset data;
    data.schema = make_schema(cardinalities);
    for (const auto& row : rows) data.codes.insert(data.codes.end(), row.begin(), row.end());
    data.weights = std::move(weights);
    return data;
}

/// Component holding every record of the dataset with hard assignment.
inline Component component_from_data(const Dataset& data) {
    Component c;
    const std::size_t m_count = data.schema.attribute_count();
    c.counts.resize(m_count);
    for (std::size_t m = 0; m < m_count; ++m) c.counts[m].assign(data.schema.cardinality(m), 0.0);
    for (std::size_t a = 0; a < data.record_count(); ++a) {
        const double w = data.weight(a);
        for (std::size_t m = 0; m < m_count; ++m) c.counts[m][data.codes[a * m_count + m]] += w;
        c.effective_size += w;
    }
    c.prior = 1.0;
    return c;
}

/// Component built from explicit per-attribute counts.
inline Component make_component(std::vector<std::vector<double>> counts, double prior = 1.0) {
    Component c;
    c.counts = std::move(counts);
    for (double v : c.counts.front()) c.effective_size += v;
    c.prior = prior;
    return c;
}

/// Reference entropy, kept independent of the library implementation.
inline double reference_entropy(const std::vector<double>& probabilities) {
    double s = 0.0;
    for (double p : probabilities)
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

/// Full product grid over the given cardinalities, one record per cell.
inline std::vector<std::vector<Code>> product_grid(const std::vector<std::size_t>& cardinalities) {
    std::vector<std::vector<Code>> rows;
    std::vector<Code> current(cardinalities.size(), 0);
    while (true) {
        rows.push_back(current);
        std::size_t m = cardinalities.size();
        while (m > 0) {
            --m;
            if (++current[m] < cardinalities[m]) break;
            current[m] = 0;
            if (m == 0) return rows;
        }
    }
}

} // namespace galileo::test
