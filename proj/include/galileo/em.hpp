#pragma once

#include "galileo/mixture.hpp"
#include "galileo/schema.hpp"

#include <optional>
#include <span>

namespace galileo {

/// Expectation-maximization settings.
struct EmConfig {
    int max_iterations = 100;
    double rel_tolerance = 1e-6; // on relative log-likelihood change
    /// Absolute Laplace pseudocount applied when reading component
    /// probabilities. Unset means 1e-9 * effective_size per component.
    std::optional<double> smoothing{};
    int threads = 1;
};

/// Pseudocount used for one component under a config.
double component_smoothing(const Component& c, const EmConfig& config);

/// A component whose effective size collapsed below 1e-12 of the total
/// weight. Kept in the model; the annealer prunes it first.
bool is_starved(const Component& c, double total_weight);

struct EStepResult {
    std::vector<double> posteriors; // row-major N x k, rows sum to 1
    double log_likelihood;
    bool degenerate = false; // some record had no admitting component
};

/// Posterior matrix and data log-likelihood of the model.
EStepResult e_step(const MixtureModel& model, const Dataset& data, const EmConfig& config = {});

/// Maximum-likelihood component update from a posterior matrix:
/// posterior-weighted value counts, effective sizes, priors.
MixtureModel m_step(std::span<const double> posteriors, std::size_t k, const Dataset& data);

/// Alternates E and M steps until the relative log-likelihood change falls
/// below the tolerance or max_iterations M-steps have run. The returned
/// model carries the log-likelihood of its own parameters.
MixtureModel fit(MixtureModel model, const Dataset& data, const EmConfig& config = {});

} // namespace galileo
