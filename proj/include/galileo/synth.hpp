#pragma once

#include "galileo/schema.hpp"

#include <cstdint>
#include <vector>

namespace galileo {

/// Rule-based synthetic categorical data: each rule pins a random half of
/// the attributes to rule-specific values; records follow their rule with
/// probability rule_conformance and are uniform elsewhere.
struct SynthSpec {
    std::size_t num_records = 0;
    std::size_t num_attributes = 10;
    std::size_t cardinality = 20;
    std::size_t num_rules = 5;
    double rule_conformance = 0.97;
    std::uint64_t seed = 0;
};

struct SynthResult {
    Dataset dataset;
    std::vector<int> labels; // generating rule per record
};

SynthResult generate(const SynthSpec& spec);

} // namespace galileo
