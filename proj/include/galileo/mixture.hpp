#pragma once

#include "galileo/schema.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace galileo {

/// One mixture component over categorical attributes.
///
/// Stores posterior-weighted value counts per attribute rather than
/// probabilities; distributions are derived views (see probability()).
/// Invariant: for every attribute, the counts sum to effective_size.
struct Component {
    std::vector<std::vector<double>> counts; // counts[m][v]
    double effective_size = 0.0;
    double prior = 0.0;

    std::size_t attribute_count() const { return counts.size(); }
};

/// Smoothed probability of value v for attribute m under component c:
/// (counts[m][v] + smoothing) / (effective_size + smoothing * cardinality(m)).
/// Throws on out-of-range v or when the denominator is not positive.
double component_probability(const Component& c, std::size_t m, Code v, double smoothing);

/// Log-likelihood of a full record under a component assuming attribute
/// independence: sum over attributes of log component_probability.
/// Returns -infinity when a zero-probability factor occurs with smoothing 0.
double record_log_likelihood(const Component& c, std::span<const Code> record, double smoothing);

/// Mixture of components with fit diagnostics.
struct MixtureModel {
    std::vector<Component> components;
    double log_likelihood = 0.0;
    bool converged = false;
    int em_iterations = 0;

    std::size_t component_count() const { return components.size(); }

    /// Throws Error when k < 1 or priors do not sum to 1 within 1e-9.
    void validate() const;
};

/// Posterior membership probabilities of one record.
struct Posterior {
    std::vector<double> probabilities; // length k, sums to 1
    double log_evidence;               // log sum_i prior_i * Pr(record | C_i)
    bool degenerate;                   // all components scored -infinity
};

/// Bayes posterior over components for one record, computed in log space.
/// When every component scores -infinity the result is uniform with the
/// degenerate flag set.
Posterior posterior(const MixtureModel& model, std::span<const Code> record, double smoothing);

/// Per-record hard assignments, optionally with the full posterior matrix.
struct ClusterAssignment {
    std::vector<int> labels;                 // record -> component index
    std::vector<double> posteriors;          // row-major N x k, may be empty
    std::size_t k = 0;
};

} // namespace galileo
