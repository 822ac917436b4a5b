#include "galileo/schema.hpp"

#include "galileo/error.hpp"

#include <numeric>
#include <unordered_set>

namespace galileo {

Schema::Schema(std::vector<AttributeSpec> attributes) : attributes_(std::move(attributes)) {
    std::unordered_set<std::string> names;
    for (const auto& attr : attributes_) {
        if (attr.values.empty())
            throw Error("schema: attribute '" + attr.name + "' has no values");
        if (!names.insert(attr.name).second)
            throw Error("schema: duplicate attribute name '" + attr.name + "'");
        std::unordered_set<std::string> labels;
        for (const auto& v : attr.values)
            if (!labels.insert(v).second)
                throw Error("schema: duplicate value '" + v + "' in attribute '" + attr.name + "'");
    }
}

std::size_t Schema::total_values() const {
    return std::accumulate(attributes_.begin(), attributes_.end(), std::size_t{0},
                           [](std::size_t acc, const AttributeSpec& a) { return acc + a.values.size(); });
}

double Dataset::total_weight() const {
    if (weights.empty()) return static_cast<double>(record_count());
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void Dataset::validate() const {
    const std::size_t m = schema.attribute_count();
    if (m == 0) throw Error("dataset: schema has no attributes");
    if (codes.empty() || codes.size() % m != 0)
        throw Error("dataset: code array size is not a multiple of the attribute count");
    const std::size_t n = codes.size() / m;
    if (!weights.empty() && weights.size() != n)
        throw Error("dataset: weights size does not match record count");
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t j = 0; j < m; ++j) {
            if (codes[a * m + j] >= schema.cardinality(j))
                throw Error("dataset: record " + std::to_string(a) + " has out-of-range code in attribute '" +
                            schema.attribute(j).name + "'");
        }
    }
    for (double w : weights)
        if (!(w > 0.0)) throw Error("dataset: record weights must be positive");
    if (!(total_weight() > 0.0)) throw Error("dataset: total weight must be positive");
}

} // namespace galileo
