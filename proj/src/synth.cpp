#include "galileo/synth.hpp"

#include "galileo/error.hpp"

#include <random>
#include <string>

namespace galileo {

namespace {

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t next_index(std::mt19937_64& rng, std::size_t bound) {
    return std::min(bound - 1, static_cast<std::size_t>(next_uniform(rng) * static_cast<double>(bound)));
}

} // namespace

SynthResult generate(const SynthSpec& spec) {
    if (spec.num_records < 1) throw Error("synth: num_records must be at least 1");
    if (spec.num_attributes < 1) throw Error("synth: num_attributes must be at least 1");
    if (spec.cardinality < 2) throw Error("synth: cardinality must be at least 2");
    if (spec.num_rules < 1) throw Error("synth: num_rules must be at least 1");
    if (!(spec.rule_conformance > 0.0 && spec.rule_conformance <= 1.0))
        throw Error("synth: rule_conformance must be in (0, 1]");

    std::mt19937_64 rng(spec.seed);
    const std::size_t m_count = spec.num_attributes;
    const std::size_t ruled_count = (m_count + 1) / 2;

    // Each rule: a random subset of attributes pinned to random values.
    struct Rule {
        std::vector<std::size_t> attributes;
        std::vector<Code> values;
    };
    std::vector<Rule> rules(spec.num_rules);
    for (auto& rule : rules) {
        std::vector<std::size_t> perm(m_count);
        for (std::size_t m = 0; m < m_count; ++m) perm[m] = m;
        for (std::size_t m = 0; m + 1 < m_count; ++m) {
            const std::size_t j = m + next_index(rng, m_count - m);
            std::swap(perm[m], perm[j]);
        }
        rule.attributes.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(ruled_count));
        rule.values.resize(ruled_count);
        for (auto& v : rule.values) v = static_cast<Code>(next_index(rng, spec.cardinality));
    }

    std::vector<AttributeSpec> attrs(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        attrs[m].name = "a" + std::to_string(m);
        attrs[m].values.reserve(spec.cardinality);
        for (std::size_t v = 0; v < spec.cardinality; ++v) attrs[m].values.push_back("v" + std::to_string(v));
    }

    SynthResult result;
    result.dataset.schema = Schema(std::move(attrs));
    result.dataset.codes.resize(spec.num_records * m_count);
    result.labels.resize(spec.num_records);
    for (std::size_t a = 0; a < spec.num_records; ++a) {
        const std::size_t r = next_index(rng, spec.num_rules);
        result.labels[a] = static_cast<int>(r);
        Code* rec = result.dataset.codes.data() + a * m_count;
        for (std::size_t m = 0; m < m_count; ++m) rec[m] = static_cast<Code>(next_index(rng, spec.cardinality));
        const Rule& rule = rules[r];
        for (std::size_t j = 0; j < ruled_count; ++j)
            if (next_uniform(rng) < spec.rule_conformance) rec[rule.attributes[j]] = rule.values[j];
    }
    return result;
}

} // namespace galileo
