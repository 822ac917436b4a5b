// Command-line front end: fit, gen, scaling, and report subcommands.

#include "galileo/anneal.hpp"
#include "galileo/criteria.hpp"
#include "galileo/csv.hpp"
#include "galileo/density.hpp"
#include "galileo/error.hpp"
#include "galileo/serialize.hpp"
#include "galileo/synth.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

namespace {

using namespace galileo;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string csv_escape(const std::string& cell, char delimiter) {
    if (cell.find_first_of(std::string{delimiter} + "\"\n\r") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char ch : cell) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

void write_dataset_csv(const Dataset& data, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("gen: cannot open '" + path.string() + "'");
    const Schema& schema = data.schema;
    for (std::size_t m = 0; m < schema.attribute_count(); ++m)
        out << (m ? "," : "") << csv_escape(schema.attribute(m).name, ',');
    out << '\n';
    for (std::size_t a = 0; a < data.record_count(); ++a) {
        for (std::size_t m = 0; m < schema.attribute_count(); ++m) {
            const Code v = data.codes[a * schema.attribute_count() + m];
            out << (m ? "," : "") << csv_escape(schema.attribute(m).values[v], ',');
        }
        out << '\n';
    }
    if (!out) throw Error("gen: write failed for '" + path.string() + "'");
}

struct FitOptions {
    std::string data_path;
    std::string label_col;
    int k_max = 32;
    double beta = 1.0;
    std::string criterion = "bic";
    std::string prune_metric = "entropy";
    double smoothing = -1.0; // negative: automatic relative pseudocount
    int max_iters = 100;
    double tol = 1e-6;
    std::string missing = "category";
    int bins = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";
    bool centers_from_rows = false;
};

AnnealConfig to_anneal_config(const FitOptions& opt) {
    AnnealConfig cfg;
    cfg.k_max = opt.k_max;
    cfg.beta = opt.beta;
    cfg.prune_metric = opt.prune_metric == "cartesian" ? PruneMetric::cartesian : PruneMetric::entropy;
    cfg.criterion = opt.criterion == "aic"       ? Criterion::aic
                    : opt.criterion == "density" ? Criterion::density
                                                 : Criterion::bic;
    cfg.seed = opt.seed;
    cfg.centers_from_rows = opt.centers_from_rows;
    cfg.em.max_iterations = opt.max_iters;
    cfg.em.rel_tolerance = opt.tol;
    if (opt.smoothing >= 0.0) cfg.em.smoothing = opt.smoothing;
    cfg.em.threads = opt.threads > 0 ? opt.threads
                                     : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return cfg;
}

IngestConfig to_ingest_config(const FitOptions& opt) {
    IngestConfig cfg;
    if (!opt.label_col.empty()) cfg.label_column = opt.label_col;
    cfg.missing_policy = opt.missing == "drop" ? MissingPolicy::drop_record : MissingPolicy::as_category;
    if (opt.bins > 0) cfg.numeric_bins = opt.bins;
    return cfg;
}

int run_fit(const FitOptions& opt) {
    const auto started = Clock::now();
    const LoadResult loaded = load_csv(fs::path(opt.data_path), to_ingest_config(opt));
    const double load_seconds = seconds_since(started);

    const auto anneal_started = Clock::now();
    const AnnealResult result = anneal(loaded.dataset, to_anneal_config(opt));
    const double anneal_seconds = seconds_since(anneal_started);

    fs::create_directories(opt.out_dir);
    save_model({loaded.dataset.schema, result.model, result.trace}, fs::path(opt.out_dir) / "model.json");
    write_assignment_csv(result.assignment, fs::path(opt.out_dir) / "assignments.csv");
    write_trace_csv(result.trace, fs::path(opt.out_dir) / "trace.csv");

    const auto selected = std::find_if(result.trace.levels.begin(), result.trace.levels.end(),
                                       [&](const AnnealLevel& l) { return l.k == result.trace.selected_k; });
    std::printf("k_star: %d\n", result.trace.selected_k);
    std::printf("log_likelihood: %.6f\n", selected->log_likelihood);
    std::printf("aic: %.6f\n", selected->aic);
    std::printf("bic: %.6f\n", selected->bic);
    std::printf("mean_density: %.6f\n", selected->mean_density);
    if (!loaded.labels.empty())
        std::printf("category_utility: %.6f\n", category_utility(result.assignment, loaded.dataset));
    std::printf("load_seconds: %.3f\n", load_seconds);
    std::printf("anneal_seconds: %.3f\n", anneal_seconds);
    return 0;
}

struct GenOptions {
    std::string out_path = "synthetic.csv";
    std::string labels_path;
    SynthSpec spec{.num_records = 10000};
};

int run_gen(const GenOptions& opt) {
    const SynthResult result = generate(opt.spec);
    write_dataset_csv(result.dataset, opt.out_path);
    if (!opt.labels_path.empty()) {
        std::ofstream out(opt.labels_path, std::ios::binary);
        if (!out) throw Error("gen: cannot open '" + opt.labels_path + "'");
        out << "record,rule\n";
        for (std::size_t a = 0; a < result.labels.size(); ++a)
            out << a << ',' << result.labels[a] << '\n';
    }
    std::printf("records: %zu\n", result.dataset.record_count());
    std::printf("attributes: %zu\n", result.dataset.schema.attribute_count());
    return 0;
}

struct ScalingOptions {
    std::vector<std::size_t> sizes{1000, 10000, 100000, 1000000};
    int k_max = 10;
    int repeats = 3;
    std::string out_path = "timing.csv";
    std::uint64_t seed = 0;
    int threads = 0;
    SynthSpec base{};
};

int run_scaling(const ScalingOptions& opt) {
    AnnealConfig cfg;
    cfg.k_max = opt.k_max;
    cfg.criterion = Criterion::bic;
    cfg.em.threads = opt.threads > 0 ? opt.threads
                                     : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw Error("scaling: cannot open '" + opt.out_path + "'");
    out << "n,median_seconds\n";

    std::vector<double> log_n, log_t;
    for (std::size_t idx = 0; idx < opt.sizes.size(); ++idx) {
        SynthSpec spec = opt.base;
        spec.num_records = opt.sizes[idx];
        spec.seed = opt.seed + idx;
        const SynthResult synth = generate(spec);

        std::vector<double> times;
        for (int r = 0; r < opt.repeats; ++r) {
            cfg.seed = opt.seed + 1000 * static_cast<std::uint64_t>(r);
            const auto started = Clock::now();
            (void)anneal(synth.dataset, cfg);
            times.push_back(seconds_since(started));
        }
        std::sort(times.begin(), times.end());
        const double median = times[times.size() / 2];
        out << spec.num_records << ',' << median << '\n';
        std::printf("n=%zu median_seconds=%.3f\n", spec.num_records, median);
        if (spec.num_records >= 1000) {
            log_n.push_back(std::log(static_cast<double>(spec.num_records)));
            log_t.push_back(std::log(median));
        }
    }
    if (log_n.size() >= 2) {
        double mean_x = 0.0, mean_y = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            mean_x += log_n[i];
            mean_y += log_t[i];
        }
        mean_x /= static_cast<double>(log_n.size());
        mean_y /= static_cast<double>(log_n.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            num += (log_n[i] - mean_x) * (log_t[i] - mean_y);
            den += (log_n[i] - mean_x) * (log_n[i] - mean_x);
        }
        std::printf("loglog_slope: %.4f\n", num / den);
    }
    return 0;
}

struct ReportOptions {
    std::string data_path;
    std::string label_col;
    std::string assignments_path;
    std::string model_path;
    std::string out_dir;
};

int run_report(const ReportOptions& opt) {
    IngestConfig ingest;
    if (!opt.label_col.empty()) ingest.label_column = opt.label_col;
    const LoadResult loaded = load_csv(fs::path(opt.data_path), ingest);
    ClusterAssignment assignment = read_assignment_csv(fs::path(opt.assignments_path));
    if (assignment.labels.size() != loaded.dataset.record_count())
        throw Error("report: assignment rows do not match the dataset");

    std::optional<ModelDocument> model;
    if (!opt.model_path.empty()) {
        model = load_model(fs::path(opt.model_path));
        assignment.k = std::max(assignment.k, model->model.component_count());
    }

    // Cluster-by-label contingency counts.
    std::vector<std::string> label_names;
    std::map<std::string, std::size_t> label_index;
    for (const auto& l : loaded.labels)
        if (label_index.emplace(l, label_names.size()).second) label_names.push_back(l);
    std::vector<std::vector<double>> table(assignment.k, std::vector<double>(label_names.size(), 0.0));
    std::vector<double> cluster_sizes(assignment.k, 0.0);
    for (std::size_t a = 0; a < assignment.labels.size(); ++a) {
        const auto i = static_cast<std::size_t>(assignment.labels[a]);
        cluster_sizes[i] += loaded.dataset.weight(a);
        if (!loaded.labels.empty()) table[i][label_index[loaded.labels[a]]] += loaded.dataset.weight(a);
    }

    std::printf("%-8s %10s", "cluster", "size");
    for (const auto& name : label_names) std::printf(" %12s", name.c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < assignment.k; ++i) {
        std::printf("%-8zu %10.0f", i, cluster_sizes[i]);
        for (std::size_t j = 0; j < label_names.size(); ++j) std::printf(" %12.0f", table[i][j]);
        std::printf("\n");
    }

    const double cu = loaded.labels.empty() ? 0.0 : category_utility(assignment, loaded.dataset);
    double mean_density = 0.0;
    if (model) mean_density = weighted_average_density(model->model);
    std::printf("summary: k=%zu", assignment.k);
    if (!loaded.labels.empty()) std::printf(" category_utility=%.6f", cu);
    if (model) std::printf(" mean_density=%.6f", mean_density);
    std::printf("\n");

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        std::ofstream out(fs::path(opt.out_dir) / "contingency.csv", std::ios::binary);
        if (!out) throw Error("report: cannot write contingency table");
        out << "cluster,size";
        for (const auto& name : label_names) out << ',' << csv_escape(name, ',');
        out << '\n';
        for (std::size_t i = 0; i < assignment.k; ++i) {
            out << i << ',' << cluster_sizes[i];
            for (std::size_t j = 0; j < label_names.size(); ++j) out << ',' << table[i][j];
            out << '\n';
        }
        std::ofstream summary(fs::path(opt.out_dir) / "summary.csv", std::ios::binary);
        summary << "k,category_utility,mean_density\n";
        summary << assignment.k << ',' << cu << ',' << mean_density << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Categorical mixture-model clustering via density-based annealing"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a mixture model to a CSV dataset");
    fit_cmd->add_option("--data", fit_opt.data_path, "Input CSV path")->required();
    fit_cmd->add_option("--label-col", fit_opt.label_col, "Label column (name or 0-based index)");
    fit_cmd->add_option("--kmax", fit_opt.k_max, "Initial component count");
    fit_cmd->add_option("--beta", fit_opt.beta, "Schedule step root (>= 1)");
    fit_cmd->add_option("--criterion", fit_opt.criterion, "Selection criterion")
        ->check(CLI::IsMember({"aic", "bic", "density"}));
    fit_cmd->add_option("--prune-metric", fit_opt.prune_metric, "Density used for pruning")
        ->check(CLI::IsMember({"entropy", "cartesian"}));
    fit_cmd->add_option("--smoothing", fit_opt.smoothing, "Laplace pseudocount (default: automatic)");
    fit_cmd->add_option("--max-iters", fit_opt.max_iters, "EM iteration cap per level");
    fit_cmd->add_option("--tol", fit_opt.tol, "EM relative log-likelihood tolerance");
    fit_cmd->add_option("--missing", fit_opt.missing, "Missing-value policy")
        ->check(CLI::IsMember({"category", "drop"}));
    fit_cmd->add_option("--bins", fit_opt.bins, "Equal-frequency bins for numeric columns");
    fit_cmd->add_option("--seed", fit_opt.seed, "Random seed");
    fit_cmd->add_option("--threads", fit_opt.threads, "EM worker threads (0 = hardware)");
    fit_cmd->add_option("--out-dir", fit_opt.out_dir, "Output directory");
    fit_cmd->add_flag("--centers-from-rows", fit_opt.centers_from_rows,
                      "Sample initial centers as data rows instead of per-attribute marginals");

    GenOptions gen_opt;
    auto* gen_cmd = app.add_subcommand("gen", "Generate rule-based synthetic categorical data");
    gen_cmd->add_option("--out", gen_opt.out_path, "Output CSV path");
    gen_cmd->add_option("--labels-out", gen_opt.labels_path, "Ground-truth rule labels CSV path");
    gen_cmd->add_option("-n,--records", gen_opt.spec.num_records, "Record count");
    gen_cmd->add_option("--attributes", gen_opt.spec.num_attributes, "Attribute count");
    gen_cmd->add_option("--cardinality", gen_opt.spec.cardinality, "Values per attribute");
    gen_cmd->add_option("--rules", gen_opt.spec.num_rules, "Number of generating rules");
    gen_cmd->add_option("--conformance", gen_opt.spec.rule_conformance, "Rule conformance probability");
    gen_cmd->add_option("--seed", gen_opt.spec.seed, "Random seed");

    ScalingOptions scale_opt;
    auto* scale_cmd = app.add_subcommand("scaling", "Time full anneals over growing synthetic datasets");
    scale_cmd->add_option("--sizes", scale_opt.sizes, "Record counts to time");
    scale_cmd->add_option("--kmax", scale_opt.k_max, "Initial component count");
    scale_cmd->add_option("--repeats", scale_opt.repeats, "Repeats per size (median reported)");
    scale_cmd->add_option("--out", scale_opt.out_path, "Timing CSV path");
    scale_cmd->add_option("--seed", scale_opt.seed, "Random seed");
    scale_cmd->add_option("--threads", scale_opt.threads, "EM worker threads (0 = hardware)");
    scale_cmd->add_option("--rules", scale_opt.base.num_rules, "Number of generating rules");
    scale_cmd->add_option("--attributes", scale_opt.base.num_attributes, "Attribute count");
    scale_cmd->add_option("--cardinality", scale_opt.base.cardinality, "Values per attribute");

    ReportOptions report_opt;
    auto* report_cmd = app.add_subcommand("report", "Contingency tables for a fitted assignment");
    report_cmd->add_option("--data", report_opt.data_path, "Input CSV path")->required();
    report_cmd->add_option("--label-col", report_opt.label_col, "Label column (name or 0-based index)");
    report_cmd->add_option("--assignments", report_opt.assignments_path, "Assignment CSV path")->required();
    report_cmd->add_option("--model", report_opt.model_path, "Model document path");
    report_cmd->add_option("--out-dir", report_opt.out_dir, "Directory for CSV output");

    try {
        app.parse(argc, argv);
        if (fit_cmd->parsed()) return run_fit(fit_opt);
        if (gen_cmd->parsed()) return run_gen(gen_opt);
        if (scale_cmd->parsed()) return run_scaling(scale_opt);
        if (report_cmd->parsed()) return run_report(report_opt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
