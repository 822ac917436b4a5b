#include "galileo/serialize.hpp"

#include "galileo/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace galileo {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "galileo-model";
constexpr int kVersion = 1;

json schema_to_json(const Schema& schema) {
    json attrs = json::array();
    for (const auto& a : schema.attributes()) attrs.push_back({{"name", a.name}, {"values", a.values}});
    return {{"attributes", std::move(attrs)}};
}

Schema schema_from_json(const json& j) {
    std::vector<AttributeSpec> attrs;
    for (const auto& a : j.at("attributes"))
        attrs.push_back({a.at("name").get<std::string>(), a.at("values").get<std::vector<std::string>>()});
    return Schema(std::move(attrs));
}

json trace_to_json(const AnnealTrace& trace) {
    json levels = json::array();
    for (const auto& l : trace.levels)
        levels.push_back({{"k", l.k},
                          {"log_likelihood", l.log_likelihood},
                          {"aic", l.aic},
                          {"bic", l.bic},
                          {"mean_density", l.mean_density},
                          {"em_iterations", l.em_iterations}});
    return {{"selected_k", trace.selected_k}, {"levels", std::move(levels)}};
}

AnnealTrace trace_from_json(const json& j) {
    AnnealTrace trace;
    trace.selected_k = j.at("selected_k").get<int>();
    for (const auto& l : j.at("levels"))
        trace.levels.push_back({l.at("k").get<int>(), l.at("log_likelihood").get<double>(),
                                l.at("aic").get<double>(), l.at("bic").get<double>(),
                                l.at("mean_density").get<double>(), l.at("em_iterations").get<int>()});
    return trace;
}

} // namespace

void save_model(const ModelDocument& doc, const std::filesystem::path& path) {
    json components = json::array();
    for (const auto& c : doc.model.components)
        components.push_back({{"prior", c.prior}, {"effective_size", c.effective_size}, {"counts", c.counts}});
    json j{{"format", kFormat},
           {"version", kVersion},
           {"schema", schema_to_json(doc.schema)},
           {"components", std::move(components)},
           {"log_likelihood", doc.model.log_likelihood},
           {"converged", doc.model.converged},
           {"em_iterations", doc.model.em_iterations}};
    if (doc.trace) j["trace"] = trace_to_json(*doc.trace);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("save_model: cannot open '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw Error("save_model: write failed for '" + path.string() + "'");
}

ModelDocument load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("load_model: cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("load_model: malformed document: " + std::string(e.what()));
    }
    try {
        if (j.at("format").get<std::string>() != kFormat)
            throw Error("load_model: unrecognized format");
        if (j.at("version").get<int>() != kVersion)
            throw Error("load_model: unsupported version " + j.at("version").dump());
        ModelDocument doc;
        doc.schema = schema_from_json(j.at("schema"));
        for (const auto& c : j.at("components")) {
            Component comp;
            comp.prior = c.at("prior").get<double>();
            comp.effective_size = c.at("effective_size").get<double>();
            comp.counts = c.at("counts").get<std::vector<std::vector<double>>>();
            doc.model.components.push_back(std::move(comp));
        }
        doc.model.log_likelihood = j.at("log_likelihood").get<double>();
        doc.model.converged = j.at("converged").get<bool>();
        doc.model.em_iterations = j.at("em_iterations").get<int>();
        if (j.contains("trace")) doc.trace = trace_from_json(j.at("trace"));
        doc.model.validate();
        return doc;
    } catch (const json::exception& e) {
        throw Error("load_model: malformed document: " + std::string(e.what()));
    }
}

void write_assignment_csv(const ClusterAssignment& assignment, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_assignment_csv: cannot open '" + path.string() + "'");
    out << "record,cluster,max_posterior\n";
    char buf[64];
    for (std::size_t a = 0; a < assignment.labels.size(); ++a) {
        double max_post = 1.0;
        if (!assignment.posteriors.empty()) {
            const double* row = assignment.posteriors.data() + a * assignment.k;
            max_post = *std::max_element(row, row + assignment.k);
        }
        std::snprintf(buf, sizeof(buf), "%zu,%d,%.12g\n", a, assignment.labels[a], max_post);
        out << buf;
    }
    if (!out) throw Error("write_assignment_csv: write failed");
}

void write_trace_csv(const AnnealTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_trace_csv: cannot open '" + path.string() + "'");
    out << "k,log_likelihood,aic,bic,mean_density,em_iterations\n";
    char buf[160];
    for (const auto& l : trace.levels) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%d\n", l.k, l.log_likelihood, l.aic,
                      l.bic, l.mean_density, l.em_iterations);
        out << buf;
    }
    if (!out) throw Error("write_trace_csv: write failed");
}

ClusterAssignment read_assignment_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_assignment_csv: cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("read_assignment_csv: empty file");
    ClusterAssignment assignment;
    int max_label = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t record = 0;
        int cluster = 0;
        if (std::sscanf(line.c_str(), "%zu,%d", &record, &cluster) != 2)
            throw Error("read_assignment_csv: malformed row '" + line + "'");
        assignment.labels.push_back(cluster);
        max_label = std::max(max_label, cluster);
    }
    if (assignment.labels.empty()) throw Error("read_assignment_csv: no rows");
    assignment.k = static_cast<std::size_t>(max_label + 1);
    return assignment;
}

} // namespace galileo
