#include "silnet/silnet.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using Graph = std::unique_ptr<silnet_graph, Deleter<silnet_graph, silnet_graph_free>>;
using Selection = std::unique_ptr<silnet_selection, Deleter<silnet_selection, silnet_selection_free>>;
using Suite = std::unique_ptr<silnet_suite, Deleter<silnet_suite, silnet_suite_free>>;
using SuiteReport = std::unique_ptr<silnet_suite_report, Deleter<silnet_suite_report, silnet_suite_report_free>>;
using AirlineReport =
    std::unique_ptr<silnet_airline_report, Deleter<silnet_airline_report, silnet_airline_report_free>>;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { silnet_string_free(p); }
    std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

int exit_code_for(silnet_status s) {
    switch (s) {
    case SILNET_OK: return kExitOk;
    case SILNET_ERR_INVALID_ARGUMENT:
    case SILNET_ERR_CONFIG:
    case SILNET_ERR_IO:
    case SILNET_ERR_PARSE: return kExitUsage;
    default: return kExitRuntime;
    }
}

// Reports a failed call and converts it to an exit code.
int report(silnet_status s, const std::string& context) {
    std::cerr << "silnet: " << context << ": " << silnet_last_error() << " [" << silnet_status_name(s) << "]\n";
    return exit_code_for(s);
}

bool write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        std::cerr << "silnet: cannot write " << path.string() << "\n";
        return false;
    }
    return true;
}

bool ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        std::cerr << "silnet: cannot create output directory " << dir.string() << ": " << ec.message() << "\n";
        return false;
    }
    return true;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct SweepFlags {
    int k_max = 20;
    unsigned jobs = default_jobs();
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("--kmax", f.k_max, "Largest K in the sweep (>= 2)")->capture_default_str()->check(
        CLI::Range(2, 1000000));
    cmd->add_option("--jobs", f.jobs, "Worker threads; results do not depend on it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

silnet_select_options select_options(const SweepFlags& f) {
    silnet_select_options o;
    silnet_select_options_init(&o);
    o.k_max = f.k_max;
    o.jobs = f.jobs;
    return o;
}

void print_line(const char* line, void*) { std::cerr << line << '\n'; }

struct SimulateFlags {
    std::string suite;
    std::string config;
    std::string out;
    int replicates = 0;
    std::optional<std::uint64_t> seed;
    unsigned jobs = default_jobs();
    bool timing = false;
};

int cmd_simulate(const SimulateFlags& f) {
    silnet_suite* raw = nullptr;
    silnet_status s = f.suite.empty() ? silnet_suite_load(f.config.c_str(), &raw)
                                      : silnet_suite_builtin(f.suite.c_str(), &raw);
    Suite suite(raw);
    if (s != SILNET_OK) {
        return report(s, f.suite.empty() ? "loading " + f.config : "suite " + f.suite);
    }
    if (f.seed) {
        silnet_suite_set_master_seed(suite.get(), *f.seed);
    }
    silnet_run_options o;
    silnet_run_options_init(&o);
    o.jobs = f.jobs;
    o.replicates_override = f.replicates;
    o.record_timing = f.timing ? 1 : 0;
    o.log = print_line;
    silnet_suite_report* rep_raw = nullptr;
    s = silnet_suite_run(suite.get(), f.out.c_str(), &o, &rep_raw);
    SuiteReport rep(rep_raw);
    if (s != SILNET_OK) {
        return report(s, "simulate");
    }
    for (std::size_t i = 0; i < silnet_suite_report_scenario_count(rep.get()); ++i) {
        std::cout << silnet_suite_report_line(rep.get(), i) << '\n';
    }
    const auto failed = silnet_suite_report_failed_scenarios(rep.get());
    if (failed > 0) {
        std::cerr << "silnet: " << failed << " scenario(s) failed; see " << f.out << "/failures.txt\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct ClusterFlags {
    std::string edges;
    std::string out;
    std::uint64_t seed = 1;
    bool emit_silhouette = false;
    SweepFlags sweep;
};

int cmd_cluster(const ClusterFlags& f) {
    silnet_graph* graw = nullptr;
    auto s = silnet_graph_read_edge_list(f.edges.c_str(), &graw);
    Graph g(graw);
    if (s != SILNET_OK) {
        return report(s, "reading " + f.edges);
    }
    if (!f.out.empty() && !ensure_dir(f.out)) {
        return kExitUsage;
    }
    const auto opts = select_options(f.sweep);
    silnet_selection* sraw = nullptr;
    s = silnet_select_k(g.get(), f.seed, &opts, &sraw);
    Selection sel(sraw);
    if (s != SILNET_OK) {
        return report(s, "cluster");
    }
    OwnedString curve;
    OwnedString assignment;
    if ((s = silnet_selection_curve_csv(sel.get(), &curve.p)) != SILNET_OK ||
        (s = silnet_selection_assignment_csv(sel.get(), g.get(), &assignment.p)) != SILNET_OK) {
        return report(s, "cluster");
    }
    std::cout << "best_k=" << silnet_selection_best_k(sel.get()) << '\n' << curve.str();

    OwnedString sil;
    if (f.emit_silhouette) {
        std::vector<int> labels(silnet_graph_node_count(g.get()));
        if ((s = silnet_selection_labels(sel.get(), labels.data(), labels.size())) != SILNET_OK ||
            (s = silnet_silhouette_json(g.get(), labels.data(), labels.size(), &sil.p)) != SILNET_OK) {
            return report(s, "silhouette");
        }
        if (f.out.empty()) {
            std::cout << sil.str() << '\n';
        }
    }
    if (!f.out.empty()) {
        const std::filesystem::path dir(f.out);
        bool ok = write_text(dir / "curve.csv", curve.str()) && write_text(dir / "assignment.csv", assignment.str());
        if (ok && f.emit_silhouette) {
            ok = write_text(dir / "silhouette.json", sil.str() + "\n");
        }
        if (!ok) {
            return kExitRuntime;
        }
    }
    return kExitOk;
}

struct AirlineFlags {
    std::string edges;
    std::string meta;
    std::string out;
    std::uint64_t seed = silnet_airline_default_seed();
    SweepFlags sweep;
};

int cmd_airline(const AirlineFlags& f) {
    const auto opts = select_options(f.sweep);
    silnet_airline_report* raw = nullptr;
    const auto s = silnet_airline_run(f.edges.c_str(), f.meta.c_str(), f.out.c_str(), f.seed, &opts, &raw);
    AirlineReport rep(raw);
    if (s != SILNET_OK) {
        return report(s, "airline");
    }
    for (std::size_t i = 0; i < silnet_airline_report_warning_count(rep.get()); ++i) {
        std::cerr << "warning: " << silnet_airline_report_warning(rep.get(), i) << '\n';
    }
    const int k = silnet_airline_report_best_k(rep.get());
    std::cout << "nodes=" << silnet_airline_report_node_count(rep.get())
              << " edges=" << silnet_airline_report_edge_count(rep.get()) << " best_k=" << k << '\n';
    for (int c = 0; c < k; ++c) {
        std::cout << "cluster " << c << ": size=" << silnet_airline_report_cluster_size(rep.get(), c)
                  << " within_density=" << silnet_airline_report_diagonal_density(rep.get(), c) << "%\n";
    }
    return kExitOk;
}

struct RingsFlags {
    std::string out;
    std::uint64_t seed = 7;
    SweepFlags sweep;
};

int cmd_rings(const RingsFlags& f) {
    const auto opts = select_options(f.sweep);
    int best_k = 0;
    double ari = 0.0;
    const auto s = silnet_rings_run(f.out.c_str(), f.seed, &opts, &best_k, &ari);
    if (s != SILNET_OK) {
        return report(s, "rings");
    }
    std::cout << "best_k=" << best_k << " ari=" << ari << '\n';
    return kExitOk;
}

int cmd_suites(const std::string& write_dir) {
    for (std::size_t i = 0; i < silnet_builtin_suite_count(); ++i) {
        const std::string name = silnet_builtin_suite_name(i);
        silnet_suite* raw = nullptr;
        auto s = silnet_suite_builtin(name.c_str(), &raw);
        Suite suite(raw);
        if (s != SILNET_OK) {
            return report(s, "suite " + name);
        }
        std::cout << name << " (" << silnet_suite_scenario_count(suite.get()) << " scenarios)\n";
        if (write_dir.empty()) {
            continue;
        }
        if (!ensure_dir(write_dir)) {
            return kExitUsage;
        }
        OwnedString json;
        if ((s = silnet_suite_to_json(suite.get(), &json.p)) != SILNET_OK) {
            return report(s, "suite " + name);
        }
        if (!write_text(std::filesystem::path(write_dir) / (name + ".json"), json.str())) {
            return kExitRuntime;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral clustering with silhouette-based selection of the number of communities"};
    app.require_subcommand(1);
    app.allow_extras(false);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation suite and write replicates/curves/summary");
    auto* suite_opt = simulate->add_option("--suite", sim.suite, "Built-in suite name (see `suites`)");
    auto* config_opt =
        simulate->add_option("--config", sim.config, "Suite config: JSON array of scenarios")->check(CLI::ExistingFile);
    suite_opt->excludes(config_opt);
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_option("--replicates", sim.replicates, "Override every scenario's replicate count")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Override every scenario's master seed");
    simulate->add_option("--jobs", sim.jobs, "Worker threads; results do not depend on it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--timing", sim.timing, "Fill the runtime_ms column (makes reruns differ)");

    ClusterFlags cl;
    auto* cluster = app.add_subcommand("cluster", "Select K for one weighted graph given as an edge list");
    cluster->add_option("--edges", cl.edges, "Edge list: src dst weight per line, weights in [0,1]")
        ->required()
        ->check(CLI::ExistingFile);
    cluster->add_option("--seed", cl.seed, "Clustering seed")->capture_default_str();
    cluster->add_option("--out", cl.out, "Directory for curve.csv, assignment.csv and silhouette.json");
    cluster->add_flag("--emit-silhouette", cl.emit_silhouette, "Also emit the per-node silhouette report as JSON");
    add_sweep_flags(cluster, cl.sweep);

    AirlineFlags air;
    auto* airline = app.add_subcommand("airline", "Cluster the airline reachability network");
    airline->add_option("--edges", air.edges, "Directed arcs: src dst weight (negative travel time)")
        ->required()
        ->check(CLI::ExistingFile);
    airline->add_option("--meta", air.meta, "City metadata CSV (id,name,lat,lon,population)")
        ->required()
        ->check(CLI::ExistingFile);
    airline->add_option("--out", air.out, "Output directory")->required();
    airline->add_option("--seed", air.seed, "Clustering seed")->capture_default_str();
    add_sweep_flags(airline, air.sweep);

    RingsFlags rings;
    auto* rings_cmd = app.add_subcommand("rings", "Concentric-rings example");
    rings_cmd->add_option("--out", rings.out, "Output directory")->required();
    rings_cmd->add_option("--seed", rings.seed, "Seed for points and clustering")->capture_default_str();
    add_sweep_flags(rings_cmd, rings.sweep);

    std::string suites_dir;
    auto* suites = app.add_subcommand("suites", "List built-in suites");
    suites->add_option("--write", suites_dir, "Also write each suite as <dir>/<name>.json");

    auto* version = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
        if (simulate->parsed() && sim.suite.empty() && sim.config.empty()) {
            throw CLI::RequiredError("simulate needs --suite or --config");
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (simulate->parsed()) return cmd_simulate(sim);
    if (cluster->parsed()) return cmd_cluster(cl);
    if (airline->parsed()) return cmd_airline(air);
    if (rings_cmd->parsed()) return cmd_rings(rings);
    if (suites->parsed()) return cmd_suites(suites_dir);
    if (version->parsed()) {
        std::cout << "silnet " << silnet_version() << '\n';
    }
    return kExitOk;
}
