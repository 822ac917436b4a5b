#pragma once

#include "galileo/mixture.hpp"

#include <span>
#include <vector>

namespace galileo {

/// Entropy-based size measures of one component.
struct DensityReport {
    std::vector<double> per_attribute_entropy; // nats
    double effective_volume;                   // exp(sum of entropies)
    double density;                            // effective_size / effective_volume
    double cartesian_density;                  // effective_size / product of support sizes
};

/// Shannon entropy in nats of a normalized distribution, with 0*log(0) := 0.
/// Throws when entries are negative or the sum deviates from 1 by more than 1e-6.
double entropy(std::span<const double> dist);

/// exp(entropy(dist)): the effective number of occupied values, in [1, len].
double effective_length(std::span<const double> dist);

/// Entropy-based density of a component using its unsmoothed count
/// distributions. Throws on an empty component.
DensityReport component_density(const Component& c);

/// Prior-weighted mean of the per-component entropy-based densities.
double weighted_average_density(const MixtureModel& model);

} // namespace galileo
