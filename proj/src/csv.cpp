#include "galileo/csv.hpp"

#include "galileo/error.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

namespace galileo {

namespace {

const std::string kMissingToken = "?";

// RFC-4180-style tokenizer: quoted fields may contain delimiters, escaped
// quotes ("") and line breaks.
std::vector<std::vector<std::string>> parse_rows(std::istream& in, char delimiter) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;

    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    const auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    char ch;
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == delimiter) {
            end_field();
        } else if (ch == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_row();
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) throw Error("csv: unterminated quoted field");
    if (!field.empty() || !row.empty()) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        end_row();
    }
    if (!any) throw Error("csv: empty input");
    return rows;
}

bool parses_as_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Equal-frequency discretization: replaces numeric cells with interval
// labels built from quantile edges; duplicate edges collapse bins.
void discretize_column(std::vector<std::vector<std::string>>& rows, std::size_t col, int bins) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) {
        if (row[col] == kMissingToken) continue;
        double v = 0.0;
        parses_as_number(row[col], v);
        values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    std::vector<double> edges; // interior bin boundaries
    for (int b = 1; b < bins; ++b) {
        const double edge = values[values.size() * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins)];
        if (edges.empty() || edge > edges.back()) edges.push_back(edge);
    }
    const auto label_of = [&](double v) {
        std::size_t b = 0;
        while (b < edges.size() && v >= edges[b]) ++b;
        const std::string lo = b == 0 ? "-inf" : format_number(edges[b - 1]);
        const std::string hi = b == edges.size() ? "inf" : format_number(edges[b]);
        return "[" + lo + "," + hi + ")";
    };
    for (auto& row : rows) {
        if (row[col] == kMissingToken) continue;
        double v = 0.0;
        parses_as_number(row[col], v);
        row[col] = label_of(v);
    }
}

} // namespace

LoadResult load_csv(const std::filesystem::path& path, const IngestConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("csv: cannot open '" + path.string() + "'");
    return load_csv(in, config);
}

LoadResult load_csv(std::istream& in, const IngestConfig& config) {
    if (config.numeric_bins && *config.numeric_bins < 2)
        throw Error("csv: numeric_bins must be at least 2");
    auto rows = parse_rows(in, config.delimiter);

    std::vector<std::string> names;
    std::size_t first_data = 0;
    const std::size_t width = rows.front().size();
    if (config.header_row) {
        names = rows.front();
        first_data = 1;
        if (rows.size() < 2) throw Error("csv: no data rows");
    } else {
        names.reserve(width);
        for (std::size_t c = 0; c < width; ++c) names.push_back("col" + std::to_string(c));
    }
    for (std::size_t r = first_data; r < rows.size(); ++r)
        if (rows[r].size() != width)
            throw Error("csv: row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                        " fields, expected " + std::to_string(width));

    // Resolve the label column by name, then by numeric index.
    std::optional<std::size_t> label_col;
    if (config.label_column) {
        const auto it = std::find(names.begin(), names.end(), *config.label_column);
        if (it != names.end()) {
            label_col = static_cast<std::size_t>(it - names.begin());
        } else {
            char* end = nullptr;
            const long idx = std::strtol(config.label_column->c_str(), &end, 10);
            if (end != config.label_column->c_str() + config.label_column->size() || idx < 0 ||
                static_cast<std::size_t>(idx) >= width)
                throw Error("csv: label column '" + *config.label_column + "' not found");
            label_col = static_cast<std::size_t>(idx);
        }
    }

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < width; ++c)
        if (!label_col || c != *label_col) feature_cols.push_back(c);
    if (feature_cols.empty()) throw Error("csv: no feature columns left");

    std::vector<std::vector<std::string>> data(rows.begin() + static_cast<std::ptrdiff_t>(first_data), rows.end());
    if (config.missing_policy == MissingPolicy::drop_record) {
        std::erase_if(data, [&](const std::vector<std::string>& row) {
            return std::any_of(feature_cols.begin(), feature_cols.end(),
                               [&](std::size_t c) { return row[c] == kMissingToken; });
        });
        if (data.empty()) throw Error("csv: every record dropped by missing-value policy");
    }

    if (config.numeric_bins) {
        for (std::size_t c : feature_cols) {
            bool numeric = false;
            double parsed = 0.0;
            for (const auto& row : data) {
                if (row[c] == kMissingToken) continue;
                if (!parses_as_number(row[c], parsed)) {
                    numeric = false;
                    break;
                }
                numeric = true;
            }
            if (numeric) discretize_column(data, c, *config.numeric_bins);
        }
    }

    // Dictionaries in first-appearance order make encoding deterministic.
    LoadResult result;
    std::vector<AttributeSpec> attrs(feature_cols.size());
    std::vector<std::unordered_map<std::string, Code>> dict(feature_cols.size());
    for (std::size_t j = 0; j < feature_cols.size(); ++j) attrs[j].name = names[feature_cols[j]];
    result.dataset.codes.reserve(data.size() * feature_cols.size());
    for (const auto& row : data) {
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::string& cell = row[feature_cols[j]];
            auto [it, inserted] = dict[j].try_emplace(cell, static_cast<Code>(attrs[j].values.size()));
            if (inserted) attrs[j].values.push_back(cell);
            result.dataset.codes.push_back(it->second);
        }
        if (label_col) result.labels.push_back(row[*label_col]);
    }
    result.dataset.schema = Schema(std::move(attrs));
    result.dataset.validate();
    return result;
}

} // namespace galileo
