#pragma once

#include "galileo/em.hpp"
#include "galileo/mixture.hpp"
#include "galileo/schema.hpp"

#include <cstdint>
#include <vector>

namespace galileo {

/// Which per-component density ranks components for pruning.
enum class PruneMetric { entropy, cartesian };

/// How the best level is selected from the annealing trace.
enum class Criterion { aic, bic, density };

struct AnnealConfig {
    int k_max = 32;
    double beta = 1.0; // schedule step root, >= 1
    PruneMetric prune_metric = PruneMetric::entropy;
    Criterion criterion = Criterion::bic;
    std::uint64_t seed = 0;
    EmConfig em{};
    /// Draw initial centers as copies of data rows instead of sampling each
    /// attribute from the global marginal.
    bool centers_from_rows = false;
};

/// One annealing level: EM result and model-quality metrics at a given k.
struct AnnealLevel {
    int k;
    double log_likelihood;
    double aic;
    double bic;
    double mean_density;
    int em_iterations;
};

struct AnnealTrace {
    std::vector<AnnealLevel> levels; // k strictly decreasing, last is 1
    int selected_k = 0;
};

/// Descending list of component counts visited by the annealer. Built from
/// the recurrence k[i+1] = floor(k[i] + beta^i) with k[0] = 1, truncated at
/// k_max and reversed; beta = 1 yields k_max, k_max-1, ..., 1.
std::vector<int> schedule(int k_max, double beta);

/// Initial mixture: every component is the global distribution averaged with
/// a random center inserted at full dataset weight, priors all 1/k_max.
MixtureModel initialize_model(const Dataset& data, int k_max, std::uint64_t seed,
                              bool centers_from_rows = false);

/// Keeps the `keep` highest-density components (ties keep the lower index),
/// reorders them by descending density, and renormalizes priors. Starved
/// components rank last.
void prune_components(MixtureModel& model, std::size_t keep, PruneMetric metric);

struct AnnealResult {
    AnnealTrace trace;
    MixtureModel model;            // stored model at the selected k
    ClusterAssignment assignment;  // argmax-posterior hard assignment
};

/// Full annealing loop: EM at every scheduled k, density-ranked pruning
/// between levels, then selection of the best level per the criterion.
AnnealResult anneal(const Dataset& data, const AnnealConfig& config);

} // namespace galileo
