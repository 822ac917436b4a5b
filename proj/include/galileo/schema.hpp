#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace galileo {

/// Category code: index into an attribute's value list.
using Code = std::uint32_t;

/// One categorical attribute: a name plus its ordered list of distinct values.
struct AttributeSpec {
    std::string name;
    std::vector<std::string> values;
};

/// Ordered list of categorical attributes describing one dataset.
///
/// Attribute names are unique, value labels within an attribute are unique,
/// and every attribute has at least one value. Immutable after construction.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<AttributeSpec> attributes);

    std::size_t attribute_count() const { return attributes_.size(); }
    std::size_t cardinality(std::size_t m) const { return attributes_[m].values.size(); }
    const AttributeSpec& attribute(std::size_t m) const { return attributes_[m]; }
    const std::vector<AttributeSpec>& attributes() const { return attributes_; }

    /// Sum of cardinalities over all attributes.
    std::size_t total_values() const;

private:
    std::vector<AttributeSpec> attributes_;
};

/// Encoded categorical records plus optional per-record multiplicities.
///
/// Codes are stored row-major: record a occupies codes[a*M .. a*M+M).
/// An empty weights vector means every record has weight 1.
struct Dataset {
    Schema schema;
    std::vector<Code> codes;
    std::vector<double> weights;

    std::size_t record_count() const {
        const std::size_t m = schema.attribute_count();
        return m == 0 ? 0 : codes.size() / m;
    }

    std::span<const Code> record(std::size_t a) const {
        const std::size_t m = schema.attribute_count();
        return {codes.data() + a * m, m};
    }

    double weight(std::size_t a) const { return weights.empty() ? 1.0 : weights[a]; }

    /// Sum of record weights (N when unweighted).
    double total_weight() const;

    /// Throws Error when any invariant is violated: empty dataset, ragged
    /// code array, out-of-range codes, or non-positive weights.
    void validate() const;
};

} // namespace galileo
