#pragma once

#include "galileo/anneal.hpp"
#include "galileo/mixture.hpp"
#include "galileo/schema.hpp"

#include <filesystem>
#include <optional>

namespace galileo {

/// On-disk model: schema, components, diagnostics, optional anneal trace.
struct ModelDocument {
    Schema schema;
    MixtureModel model;
    std::optional<AnnealTrace> trace;
};

/// Writes a versioned JSON model document. Doubles round-trip exactly.
void save_model(const ModelDocument& doc, const std::filesystem::path& path);

/// Parses a model document; throws on version mismatch or malformed input.
ModelDocument load_model(const std::filesystem::path& path);

/// record,cluster,max_posterior rows.
void write_assignment_csv(const ClusterAssignment& assignment, const std::filesystem::path& path);

/// One row per annealing level: k,log_likelihood,aic,bic,mean_density,em_iterations.
void write_trace_csv(const AnnealTrace& trace, const std::filesystem::path& path);

/// Reads labels back from an assignment CSV.
ClusterAssignment read_assignment_csv(const std::filesystem::path& path);

} // namespace galileo
