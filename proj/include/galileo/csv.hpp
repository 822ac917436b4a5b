#pragma once

#include "galileo/schema.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace galileo {

enum class MissingPolicy { as_category, drop_record };

struct IngestConfig {
    char delimiter = ',';
    bool header_row = true;
    /// Column excluded from clustering but returned for evaluation.
    /// Resolved as a header name first, then as a 0-based index.
    std::optional<std::string> label_column{};
    MissingPolicy missing_policy = MissingPolicy::as_category;
    /// When set, columns whose non-missing cells all parse as numbers are
    /// discretized into this many equal-frequency bins.
    std::optional<int> numeric_bins{};
};

struct LoadResult {
    Dataset dataset;
    std::vector<std::string> labels; // empty when no label column configured
};

/// Loads a delimiter-separated file with optional quoting ("" escapes a
/// quote). Values are encoded in first-appearance order; '?' cells follow
/// the missing-value policy.
LoadResult load_csv(const std::filesystem::path& path, const IngestConfig& config = {});
LoadResult load_csv(std::istream& in, const IngestConfig& config = {});

} // namespace galileo
