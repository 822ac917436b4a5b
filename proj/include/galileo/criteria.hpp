#pragma once

#include "galileo/mixture.hpp"
#include "galileo/schema.hpp"

#include <cstdint>
#include <optional>

namespace galileo {

/// Free parameters of a k-component categorical mixture:
/// (k - 1) mixing weights plus k * sum_m (cardinality(m) - 1) multinomial cells.
std::int64_t degrees_of_freedom(const Schema& schema, std::size_t k);

double aic(double log_likelihood, std::int64_t dof);
double bic(double log_likelihood, std::int64_t dof, double n);

/// Category Utility of a hard clustering: mean per-cluster predictive gain
/// sum_i P(C_i) * sum_m sum_v [P(v|C_i)^2 - P(v)^2], divided by k.
/// Empty clusters contribute zero.
double category_utility(const ClusterAssignment& assignment, const Dataset& data);

/// Model-quality summary for one fitted mixture.
struct CriteriaReport {
    double aic = 0.0;
    double bic = 0.0;
    std::int64_t dof = 0;
    double mean_density = 0.0;
    std::optional<double> category_utility;
};

} // namespace galileo
