#pragma once

#include "silnet/sbm.hpp"
#include "silnet/spectral.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace silnet {

enum class GeneratorKind { Sbm, Rings };

/// One simulation cell: how to generate a network, how many replicates to
/// draw and the candidate range for K.
struct ScenarioSpec {
    std::string id;
    GeneratorKind generator = GeneratorKind::Sbm;
    std::size_t n = 0;
    int k_true = 0;
    double p_win = 0.0;
    double p_btw = 0.0;
    std::optional<WeakPair> weak_pair;
    /// Both set for weighted networks, both empty for unweighted ones.
    std::optional<WeightDistribution> w_win;
    std::optional<WeightDistribution> w_btw;
    bool fully_connected = false;
    SizeProfile profile;
    int replicates = 1;
    std::uint64_t master_seed = 0;
    int k_max = 20;
    /// Rings generator only.
    std::vector<std::size_t> ring_counts;
    std::vector<double> ring_radii;

    bool operator==(const ScenarioSpec&) const;
};

/// Throws ConfigError describing the first inconsistency.
void validate(const ScenarioSpec& spec);

nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j);
/// A suite config is a JSON array of scenario objects. Throws ConfigError
/// on an empty list, duplicate ids or any invalid scenario.
std::vector<ScenarioSpec> suite_from_json(const nlohmann::json& j);
std::vector<ScenarioSpec> load_suite(const std::filesystem::path& path);

/// Stream for replicate r of a scenario: derive(derive(master_seed,
/// hash(id)), r). Independent of execution order.
std::uint64_t replicate_seed(const ScenarioSpec& spec, int replicate);

/// A sampled network with its planted partition.
SampledGraph generate_network(const ScenarioSpec& spec, std::uint64_t seed);

struct ReplicateRecord {
    std::string scenario_id;
    int replicate = 0;
    std::uint64_t seed = 0;
    int selected_k = 0;
    double ari = 0.0;
    int k_true = 0;
    std::size_t n = 0;
    std::optional<double> runtime_ms;
    std::map<int, double> curve;
    /// Set when generation or clustering threw; such records carry no result.
    std::optional<std::string> error;
};

struct RunOptions {
    unsigned jobs = 1;
    /// Wall time is only measured on request so that reruns stay byte-identical.
    bool record_timing = false;
    KMeansOptions kmeans;
};

/// One record per replicate, ordered by replicate index. Exceptions from a
/// replicate are captured in its record.
std::vector<ReplicateRecord> run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

/// Runs a single replicate; the building block of run_scenario and run_suite.
ReplicateRecord run_replicate(const ScenarioSpec& spec, int replicate, const RunOptions& options = {});

struct ScenarioSummary {
    std::size_t replicates = 0;  // successful records
    std::size_t failed = 0;
    double proportion_correct = 0.0;
    std::map<int, std::size_t> k_histogram;
    double ari_median = 0.0;
    double ari_q1 = 0.0;
    double ari_q3 = 0.0;
};

/// Linear-interpolation quantile (the "type 7" estimator): position
/// p * (m - 1) in the sorted sample, interpolated between neighbours.
double quantile(std::vector<double> values, double p);

/// Throws AggregationError when no record succeeded.
ScenarioSummary aggregate(const std::vector<ReplicateRecord>& records, int k_true);

struct SuiteOptions {
    unsigned jobs = 1;
    std::optional<int> replicates_override;
    bool record_timing = false;
    KMeansOptions kmeans;
    std::function<void(const std::string&)> log;
};

struct ScenarioOutcome {
    ScenarioSpec spec;
    std::optional<ScenarioSummary> summary;
    std::size_t failed = 0;
    /// False when more than 1% of replicates failed or aggregation failed.
    bool ok = true;
    std::string line;  // one-line human summary
};

struct SuiteResult {
    std::vector<ScenarioOutcome> scenarios;
    bool ok() const;
};

/// Validates every scenario and the output directory, then runs all
/// replicates and writes replicates.csv, summary.csv and suite.json into
/// out_dir (each atomically).
SuiteResult run_suite(std::vector<ScenarioSpec> specs, const std::filesystem::path& out_dir,
                      const SuiteOptions& options = {});

std::string replicates_csv(const std::vector<ReplicateRecord>& records);
std::string summary_csv(const std::vector<ScenarioOutcome>& outcomes);
nlohmann::json suite_manifest(const std::vector<ScenarioSpec>& specs);
/// Inverse of suite_manifest for the scenario list.
std::vector<ScenarioSpec> specs_from_manifest(const nlohmann::json& manifest);

/// Names accepted by builtin_suite, e.g. "table2_desk".
std::vector<std::string> builtin_suite_names();
/// Throws ConfigError for unknown names.
std::vector<ScenarioSpec> builtin_suite(const std::string& name);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

} // namespace silnet
