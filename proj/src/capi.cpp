#include "silnet/silnet.h"

#include "silnet/airline.hpp"
#include "silnet/edgelist.hpp"
#include "silnet/error.hpp"
#include "silnet/harness.hpp"
#include "silnet/metrics.hpp"
#include "silnet/spectral.hpp"
#include "silnet/version.hpp"
#include "silnet/workflows.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

struct silnet_graph {
    silnet::WeightedGraph graph;
};

struct silnet_selection {
    silnet::KSelectionResult result;
    std::vector<std::pair<int, double>> curve;
};

struct silnet_suite {
    std::vector<silnet::ScenarioSpec> specs;
};

struct silnet_suite_report {
    silnet::SuiteResult result;
};

struct silnet_airline_report {
    silnet::airline::CaseStudyReport report;
};

namespace {

thread_local std::string g_last_error;

silnet_status fail(silnet_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <class F>
silnet_status guarded(F&& body) {
    try {
        body();
        return SILNET_OK;
    } catch (const silnet::ConfigError& e) {
        return fail(SILNET_ERR_CONFIG, e.what());
    } catch (const silnet::DimensionError& e) {
        return fail(SILNET_ERR_DIMENSION, e.what());
    } catch (const silnet::DegenerateInputError& e) {
        return fail(SILNET_ERR_DEGENERATE, e.what());
    } catch (const silnet::NumericError& e) {
        return fail(SILNET_ERR_NUMERIC, e.what());
    } catch (const silnet::IoError& e) {
        return fail(SILNET_ERR_IO, e.what());
    } catch (const silnet::ParseError& e) {
        return fail(SILNET_ERR_PARSE, e.what());
    } catch (const silnet::AggregationError& e) {
        return fail(SILNET_ERR_AGGREGATION, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(SILNET_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SILNET_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SILNET_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SILNET_ERR_INTERNAL, "unknown error");
    }
}

silnet_status null_arg(const char* what) {
    return fail(SILNET_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

silnet::SelectOptions to_select_options(const silnet_select_options* o) {
    silnet::SelectOptions opts;
    if (o != nullptr) {
        opts.k_min = o->k_min;
        opts.k_max = o->k_max;
        opts.kmeans.restarts = o->kmeans_restarts;
        opts.kmeans.max_iterations = o->kmeans_max_iterations;
        opts.kmeans.tolerance = o->kmeans_tolerance;
        opts.jobs = o->jobs == 0 ? 1 : o->jobs;
    }
    return opts;
}

silnet::ClusterAssignment labels_to_assignment(const int* labels, size_t n) {
    return silnet::ClusterAssignment::from_raw_labels(std::span<const int>(labels, n));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = silnet::builtin_suite_names();
    return names;
}

} // namespace

extern "C" {

const char* silnet_version(void) { return silnet::kVersion.data(); }

const char* silnet_status_name(silnet_status status) {
    switch (status) {
    case SILNET_OK: return "ok";
    case SILNET_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SILNET_ERR_CONFIG: return "config";
    case SILNET_ERR_DIMENSION: return "dimension";
    case SILNET_ERR_DEGENERATE: return "degenerate";
    case SILNET_ERR_NUMERIC: return "numeric";
    case SILNET_ERR_IO: return "io";
    case SILNET_ERR_PARSE: return "parse";
    case SILNET_ERR_AGGREGATION: return "aggregation";
    case SILNET_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* silnet_last_error(void) { return g_last_error.c_str(); }

void silnet_string_free(char* s) { std::free(s); }

silnet_status silnet_graph_from_dense(size_t n, const double* weights, silnet_graph** out) {
    if (weights == nullptr && n > 0) return null_arg("weights");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        const auto size = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd w = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            weights, size, size);
        std::vector<std::string> ids(n);
        for (size_t i = 0; i < n; ++i) {
            ids[i] = std::to_string(i);
        }
        *out = new silnet_graph{silnet::WeightedGraph(std::move(w), std::move(ids))};
    });
}

silnet_status silnet_graph_read_edge_list(const char* path, silnet_graph** out) {
    if (path == nullptr) return null_arg("path");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new silnet_graph{silnet::read_edge_list(std::filesystem::path(path))}; });
}

silnet_status silnet_graph_write_edge_list(const silnet_graph* g, const char* path) {
    if (g == nullptr) return null_arg("graph");
    if (path == nullptr) return null_arg("path");
    return guarded([&] { silnet::write_edge_list(std::filesystem::path(path), g->graph); });
}

size_t silnet_graph_node_count(const silnet_graph* g) { return g == nullptr ? 0 : g->graph.size(); }

size_t silnet_graph_edge_count(const silnet_graph* g) { return g == nullptr ? 0 : g->graph.edge_count(); }

const char* silnet_graph_node_id(const silnet_graph* g, size_t i) {
    if (g == nullptr || i >= g->graph.node_ids().size()) return nullptr;
    return g->graph.node_ids()[i].c_str();
}

void silnet_graph_free(silnet_graph* g) { delete g; }

silnet_status silnet_silhouette(const silnet_graph* g, const int* labels, size_t n, double* per_node,
                                double* global) {
    if (g == nullptr) return null_arg("graph");
    if (labels == nullptr) return null_arg("labels");
    if (global == nullptr) return null_arg("global");
    if (n != g->graph.size()) {
        return fail(SILNET_ERR_DIMENSION, "label count " + std::to_string(n) + " does not match node count " +
                                              std::to_string(g->graph.size()));
    }
    return guarded([&] {
        const auto report = silnet::silhouette(silnet::distance_from_adjacency(g->graph), labels_to_assignment(labels, n));
        if (per_node != nullptr) {
            std::copy(report.per_node.begin(), report.per_node.end(), per_node);
        }
        *global = report.global;
    });
}

silnet_status silnet_silhouette_json(const silnet_graph* g, const int* labels, size_t n, char** json_out) {
    if (g == nullptr) return null_arg("graph");
    if (labels == nullptr) return null_arg("labels");
    if (json_out == nullptr) return null_arg("json_out");
    *json_out = nullptr;
    if (n != g->graph.size()) {
        return fail(SILNET_ERR_DIMENSION, "label count " + std::to_string(n) + " does not match node count " +
                                              std::to_string(g->graph.size()));
    }
    return guarded([&] {
        const auto report = silnet::silhouette(silnet::distance_from_adjacency(g->graph), labels_to_assignment(labels, n));
        *json_out = dup_string(silnet::to_json(report).dump());
    });
}

silnet_status silnet_adjusted_rand_index(const int* a, const int* b, size_t n, double* out) {
    if ((a == nullptr || b == nullptr) && n > 0) return null_arg("labels");
    if (out == nullptr) return null_arg("out");
    return guarded([&] {
        *out = silnet::adjusted_rand_index(std::span<const int>(a, n), std::span<const int>(b, n));
    });
}

void silnet_select_options_init(silnet_select_options* options) {
    if (options == nullptr) return;
    const silnet::SelectOptions defaults;
    options->k_min = defaults.k_min;
    options->k_max = defaults.k_max;
    options->kmeans_restarts = defaults.kmeans.restarts;
    options->kmeans_max_iterations = defaults.kmeans.max_iterations;
    options->kmeans_tolerance = defaults.kmeans.tolerance;
    options->jobs = defaults.jobs;
}

silnet_status silnet_select_k(const silnet_graph* g, uint64_t seed, const silnet_select_options* options,
                              silnet_selection** out) {
    if (g == nullptr) return null_arg("graph");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto result = silnet::select_k(g->graph, seed, to_select_options(options));
        std::vector<std::pair<int, double>> curve(result.curve.begin(), result.curve.end());
        *out = new silnet_selection{std::move(result), std::move(curve)};
    });
}

int silnet_selection_best_k(const silnet_selection* s) { return s == nullptr ? 0 : s->result.best_k; }

size_t silnet_selection_curve_size(const silnet_selection* s) { return s == nullptr ? 0 : s->curve.size(); }

silnet_status silnet_selection_curve_at(const silnet_selection* s, size_t index, int* k, double* score) {
    if (s == nullptr) return null_arg("selection");
    if (index >= s->curve.size()) {
        return fail(SILNET_ERR_INVALID_ARGUMENT, "curve index " + std::to_string(index) + " out of range");
    }
    if (k != nullptr) *k = s->curve[index].first;
    if (score != nullptr) *score = s->curve[index].second;
    return SILNET_OK;
}

silnet_status silnet_selection_labels(const silnet_selection* s, int* labels, size_t n) {
    if (s == nullptr) return null_arg("selection");
    if (labels == nullptr) return null_arg("labels");
    if (n != s->result.assignment.size()) {
        return fail(SILNET_ERR_DIMENSION, "buffer holds " + std::to_string(n) + " labels, assignment has " +
                                              std::to_string(s->result.assignment.size()));
    }
    const auto& z = s->result.assignment.labels();
    std::copy(z.begin(), z.end(), labels);
    return SILNET_OK;
}

silnet_status silnet_selection_curve_csv(const silnet_selection* s, char** csv_out) {
    if (s == nullptr) return null_arg("selection");
    if (csv_out == nullptr) return null_arg("csv_out");
    *csv_out = nullptr;
    return guarded([&] { *csv_out = dup_string(silnet::curve_csv(s->result.curve)); });
}

silnet_status silnet_selection_assignment_csv(const silnet_selection* s, const silnet_graph* g, char** csv_out) {
    if (s == nullptr) return null_arg("selection");
    if (g == nullptr) return null_arg("graph");
    if (csv_out == nullptr) return null_arg("csv_out");
    *csv_out = nullptr;
    if (g->graph.size() != s->result.assignment.size()) {
        return fail(SILNET_ERR_DIMENSION, "graph and selection sizes differ");
    }
    return guarded([&] { *csv_out = dup_string(silnet::assignment_csv(g->graph, s->result.assignment)); });
}

void silnet_selection_free(silnet_selection* s) { delete s; }

size_t silnet_builtin_suite_count(void) { return suite_names().size(); }

const char* silnet_builtin_suite_name(size_t index) {
    const auto& names = suite_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

silnet_status silnet_suite_builtin(const char* name, silnet_suite** out) {
    if (name == nullptr) return null_arg("name");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new silnet_suite{silnet::builtin_suite(name)}; });
}

silnet_status silnet_suite_load(const char* path, silnet_suite** out) {
    if (path == nullptr) return null_arg("path");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new silnet_suite{silnet::load_suite(path)}; });
}

silnet_status silnet_suite_to_json(const silnet_suite* suite, char** json_out) {
    if (suite == nullptr) return null_arg("suite");
    if (json_out == nullptr) return null_arg("json_out");
    *json_out = nullptr;
    return guarded([&] {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& spec : suite->specs) {
            arr.push_back(silnet::to_json(spec));
        }
        *json_out = dup_string(arr.dump(2) + "\n");
    });
}

size_t silnet_suite_scenario_count(const silnet_suite* suite) { return suite == nullptr ? 0 : suite->specs.size(); }

const char* silnet_suite_scenario_id(const silnet_suite* suite, size_t index) {
    if (suite == nullptr || index >= suite->specs.size()) return nullptr;
    return suite->specs[index].id.c_str();
}

silnet_status silnet_suite_set_master_seed(silnet_suite* suite, uint64_t seed) {
    if (suite == nullptr) return null_arg("suite");
    for (auto& spec : suite->specs) {
        spec.master_seed = seed;
    }
    return SILNET_OK;
}

void silnet_suite_free(silnet_suite* suite) { delete suite; }

void silnet_run_options_init(silnet_run_options* options) {
    if (options == nullptr) return;
    options->jobs = 1;
    options->replicates_override = 0;
    options->record_timing = 0;
    options->log = nullptr;
    options->log_user = nullptr;
}

silnet_status silnet_suite_run(const silnet_suite* suite, const char* out_dir, const silnet_run_options* options,
                               silnet_suite_report** out) {
    if (suite == nullptr) return null_arg("suite");
    if (out_dir == nullptr) return null_arg("out_dir");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    silnet_run_options o;
    silnet_run_options_init(&o);
    if (options != nullptr) o = *options;
    if (o.replicates_override < 0) {
        return fail(SILNET_ERR_CONFIG, "replicates override must be positive");
    }
    return guarded([&] {
        silnet::SuiteOptions so;
        so.jobs = o.jobs == 0 ? 1 : o.jobs;
        if (o.replicates_override > 0) so.replicates_override = o.replicates_override;
        so.record_timing = o.record_timing != 0;
        if (o.log != nullptr) {
            so.log = [fn = o.log, user = o.log_user](const std::string& line) { fn(line.c_str(), user); };
        }
        *out = new silnet_suite_report{silnet::run_suite(suite->specs, out_dir, so)};
    });
}

size_t silnet_suite_report_scenario_count(const silnet_suite_report* r) {
    return r == nullptr ? 0 : r->result.scenarios.size();
}

const char* silnet_suite_report_line(const silnet_suite_report* r, size_t index) {
    if (r == nullptr || index >= r->result.scenarios.size()) return nullptr;
    return r->result.scenarios[index].line.c_str();
}

size_t silnet_suite_report_failed_scenarios(const silnet_suite_report* r) {
    if (r == nullptr) return 0;
    size_t failed = 0;
    for (const auto& s : r->result.scenarios) {
        if (!s.ok) ++failed;
    }
    return failed;
}

void silnet_suite_report_free(silnet_suite_report* r) { delete r; }

uint64_t silnet_airline_default_seed(void) { return silnet::airline::kDefaultSeed; }

silnet_status silnet_airline_run(const char* edges_path, const char* meta_path, const char* out_dir, uint64_t seed,
                                 const silnet_select_options* options, silnet_airline_report** out) {
    if (edges_path == nullptr) return null_arg("edges_path");
    if (meta_path == nullptr) return null_arg("meta_path");
    if (out_dir == nullptr) return null_arg("out_dir");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        *out = new silnet_airline_report{
            silnet::airline::run_case_study(edges_path, meta_path, out_dir, seed, to_select_options(options))};
    });
}

int silnet_airline_report_best_k(const silnet_airline_report* r) { return r == nullptr ? 0 : r->report.best_k; }

size_t silnet_airline_report_node_count(const silnet_airline_report* r) { return r == nullptr ? 0 : r->report.nodes; }

size_t silnet_airline_report_edge_count(const silnet_airline_report* r) { return r == nullptr ? 0 : r->report.edges; }

size_t silnet_airline_report_cluster_size(const silnet_airline_report* r, size_t cluster) {
    if (r == nullptr || cluster >= r->report.cluster_sizes.size()) return 0;
    return r->report.cluster_sizes[cluster];
}

double silnet_airline_report_diagonal_density(const silnet_airline_report* r, size_t cluster) {
    if (r == nullptr || cluster >= r->report.diagonal_density.size()) return 0.0;
    return r->report.diagonal_density[cluster];
}

size_t silnet_airline_report_warning_count(const silnet_airline_report* r) {
    return r == nullptr ? 0 : r->report.warnings.size();
}

const char* silnet_airline_report_warning(const silnet_airline_report* r, size_t index) {
    if (r == nullptr || index >= r->report.warnings.size()) return nullptr;
    return r->report.warnings[index].c_str();
}

void silnet_airline_report_free(silnet_airline_report* r) { delete r; }

silnet_status silnet_rings_run(const char* out_dir, uint64_t seed, const silnet_select_options* options, int* best_k,
                               double* ari) {
    if (out_dir == nullptr) return null_arg("out_dir");
    return guarded([&] {
        silnet::RingsConfig cfg;
        cfg.seed = seed;
        const auto report = silnet::run_rings(out_dir, cfg, to_select_options(options));
        if (best_k != nullptr) *best_k = report.best_k;
        if (ari != nullptr) *ari = report.ari;
    });
}

} // extern "C"
