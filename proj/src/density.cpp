#include "galileo/density.hpp"

#include "galileo/error.hpp"

#include <cmath>
#include <string>

namespace galileo {

double entropy(std::span<const double> dist) {
    double sum = 0.0;
    for (double p : dist) {
        if (p < 0.0) throw Error("entropy: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw Error("entropy: distribution sums to " + std::to_string(sum) + ", expected 1");
    double s = 0.0;
    for (double p : dist)
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

double effective_length(std::span<const double> dist) {
    return std::exp(entropy(dist));
}

DensityReport component_density(const Component& c) {
    if (!(c.effective_size > 0.0)) throw Error("component_density: empty component");
    DensityReport report;
    report.per_attribute_entropy.reserve(c.counts.size());
    double entropy_sum = 0.0;
    double log_support = 0.0;
    const double support_cutoff = 1e-12 * c.effective_size;
    for (const auto& col : c.counts) {
        double s = 0.0;
        std::size_t support = 0;
        for (double cnt : col) {
            if (cnt > support_cutoff) ++support;
            if (cnt > 0.0) {
                const double p = cnt / c.effective_size;
                s -= p * std::log(p);
            }
        }
        report.per_attribute_entropy.push_back(s);
        entropy_sum += s;
        log_support += std::log(static_cast<double>(support > 0 ? support : 1));
    }
    report.effective_volume = std::exp(entropy_sum);
    report.density = c.effective_size * std::exp(-entropy_sum);
    report.cartesian_density = std::exp(std::log(c.effective_size) - log_support);
    return report;
}

double weighted_average_density(const MixtureModel& model) {
    double acc = 0.0;
    for (const auto& c : model.components) acc += c.prior * component_density(c).density;
    return acc;
}

} // namespace galileo
