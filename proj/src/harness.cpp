#include "silnet/harness.hpp"

#include "silnet/edgelist.hpp"
#include "silnet/error.hpp"
#include "silnet/metrics.hpp"
#include "silnet/parallel.hpp"
#include "silnet/rng.hpp"
#include "silnet/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace silnet {

using nlohmann::json;

namespace {

constexpr std::uint64_t kClusteringStream = 0x5E1EC7ULL;

bool default_ne_fraction(int k, double fraction) {
    try {
        return SizeProfile::imbalanced_default(k).dominant_fraction == fraction;
    } catch (const ConfigError&) {
        return false;
    }
}

json dist_to_json(const std::optional<WeightDistribution>& d) {
    if (!d) {
        return nullptr;
    }
    return {{"lo", d->lo}, {"hi", d->hi}};
}

std::optional<WeightDistribution> dist_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    const auto& d = j.at(key);
    return WeightDistribution::uniform(d.at("lo").get<double>(), d.at("hi").get<double>());
}

std::string dist_text(const std::optional<WeightDistribution>& d) {
    return d ? format_double(d->lo) + ":" + format_double(d->hi) : std::string();
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool ScenarioSpec::operator==(const ScenarioSpec& o) const {
    auto same_pair = [](const std::optional<WeakPair>& a, const std::optional<WeakPair>& b) {
        if (a.has_value() != b.has_value()) {
            return false;
        }
        return !a || (a->a == b->a && a->b == b->b && a->p == b->p);
    };
    return id == o.id && generator == o.generator && n == o.n && k_true == o.k_true &&
           p_win == o.p_win && p_btw == o.p_btw && same_pair(weak_pair, o.weak_pair) &&
           w_win == o.w_win && w_btw == o.w_btw && fully_connected == o.fully_connected &&
           profile.kind == o.profile.kind && profile.dominant_fraction == o.profile.dominant_fraction &&
           replicates == o.replicates && master_seed == o.master_seed && k_max == o.k_max &&
           ring_counts == o.ring_counts && ring_radii == o.ring_radii;
}

void validate(const ScenarioSpec& s) {
    if (s.id.empty() || s.id.find_first_of(",\"\n\r") != std::string::npos) {
        throw ConfigError("scenario id '" + s.id + "' must be non-empty and free of commas and quotes");
    }
    const std::string where = "scenario '" + s.id + "': ";
    if (s.replicates < 1) {
        throw ConfigError(where + "replicates must be >= 1");
    }
    if (s.k_max < 2 || static_cast<std::size_t>(s.k_max) > s.n) {
        throw ConfigError(where + "k_max must satisfy 2 <= k_max <= n");
    }
    try {
        if (s.generator == GeneratorKind::Rings) {
            if (s.ring_counts.empty() || s.ring_counts.size() != s.ring_radii.size()) {
                throw ConfigError("ring counts and radii must be non-empty and of equal length");
            }
            const auto total = std::accumulate(s.ring_counts.begin(), s.ring_counts.end(), std::size_t{0});
            if (total != s.n || static_cast<std::size_t>(s.k_true) != s.ring_counts.size()) {
                throw ConfigError("n and k_true must equal the ring total and ring count");
            }
            return;
        }
        allocate_sizes(s.n, s.k_true, s.profile);
        build_prob_matrix(s.k_true, s.p_win, s.p_btw, s.weak_pair);
        if (s.w_win.has_value() != s.w_btw.has_value()) {
            throw ConfigError("w_win and w_btw must be given together");
        }
        if (s.fully_connected && !s.w_win) {
            throw ConfigError("fully connected scenarios need weight distributions");
        }
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
    }
}

json to_json(const ScenarioSpec& s) {
    json j = {{"id", s.id},
              {"n", s.n},
              {"k_true", s.k_true},
              {"p_win", s.p_win},
              {"p_btw", s.p_btw},
              {"weak_pair", nullptr},
              {"w_win", dist_to_json(s.w_win)},
              {"w_btw", dist_to_json(s.w_btw)},
              {"fully_connected", s.fully_connected},
              {"profile", s.profile.kind == ProfileKind::Equal ? "EQ" : "NE"},
              {"replicates", s.replicates},
              {"master_seed", s.master_seed},
              {"k_max", s.k_max}};
    if (s.weak_pair) {
        j["weak_pair"] = {{"a", s.weak_pair->a}, {"b", s.weak_pair->b}, {"p", s.weak_pair->p}};
    }
    if (s.profile.kind == ProfileKind::Imbalanced && !default_ne_fraction(s.k_true, s.profile.dominant_fraction)) {
        j["ne_fraction"] = s.profile.dominant_fraction;
    }
    if (s.generator == GeneratorKind::Rings) {
        j["generator"] = "rings";
        j["rings"] = {{"counts", s.ring_counts}, {"radii", s.ring_radii}};
    }
    return j;
}

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec s;
    try {
        s.id = j.at("id").get<std::string>();
        s.n = j.at("n").get<std::size_t>();
        s.k_true = j.at("k_true").get<int>();
        s.replicates = j.value("replicates", 1);
        s.master_seed = j.value("master_seed", std::uint64_t{0});
        s.k_max = j.value("k_max", 20);
        const auto generator = j.value("generator", std::string("sbm"));
        if (generator == "rings") {
            s.generator = GeneratorKind::Rings;
            s.ring_counts = j.at("rings").at("counts").get<std::vector<std::size_t>>();
            s.ring_radii = j.at("rings").at("radii").get<std::vector<double>>();
        } else if (generator != "sbm") {
            throw ConfigError("unknown generator '" + generator + "'");
        }
        s.p_win = j.value("p_win", 0.0);
        s.p_btw = j.value("p_btw", 0.0);
        if (j.contains("weak_pair") && !j.at("weak_pair").is_null()) {
            const auto& wp = j.at("weak_pair");
            s.weak_pair = WeakPair{wp.at("a").get<int>(), wp.at("b").get<int>(), wp.at("p").get<double>()};
        }
        s.w_win = dist_from_json(j, "w_win");
        s.w_btw = dist_from_json(j, "w_btw");
        s.fully_connected = j.value("fully_connected", false);
        const auto profile = j.value("profile", std::string("EQ"));
        if (profile == "EQ") {
            s.profile = SizeProfile::equal();
        } else if (profile == "NE") {
            s.profile = j.contains("ne_fraction")
                            ? SizeProfile::imbalanced(j.at("ne_fraction").get<double>())
                            : SizeProfile::imbalanced_default(s.k_true);
        } else {
            throw ConfigError("profile must be \"EQ\" or \"NE\", got '" + profile + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError("malformed scenario " + j.dump() + ": " + e.what());
    }
    validate(s);
    return s;
}

std::vector<ScenarioSpec> suite_from_json(const json& j) {
    if (!j.is_array()) {
        throw ConfigError("suite config must be a JSON array of scenarios");
    }
    if (j.empty()) {
        throw ConfigError("suite config contains no scenarios");
    }
    std::vector<ScenarioSpec> specs;
    std::set<std::string> ids;
    for (const auto& item : j) {
        auto spec = scenario_from_json(item);
        if (!ids.insert(spec.id).second) {
            throw ConfigError("duplicate scenario id '" + spec.id + "'");
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<ScenarioSpec> load_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open suite config '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("suite config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return suite_from_json(j);
}

std::uint64_t replicate_seed(const ScenarioSpec& spec, int replicate) {
    return rng::derive(rng::derive(spec.master_seed, rng::hash_string(spec.id)),
                       static_cast<std::uint64_t>(replicate));
}

SampledGraph generate_network(const ScenarioSpec& s, std::uint64_t seed) {
    if (s.generator == GeneratorKind::Rings) {
        auto pc = generate_rings(s.ring_counts, s.ring_radii, seed);
        auto g = adjacency_from_points(pc);
        return {std::move(g), ClusterAssignment(std::move(pc.labels), static_cast<int>(s.ring_counts.size()))};
    }
    const auto sizes = allocate_sizes(s.n, s.k_true, s.profile);
    if (s.fully_connected) {
        return sample_fully_connected(sizes, *s.w_win, *s.w_btw, seed);
    }
    const auto probs = build_prob_matrix(s.k_true, s.p_win, s.p_btw, s.weak_pair);
    if (s.w_win) {
        return sample_weighted(sizes, probs, *s.w_win, *s.w_btw, seed);
    }
    return sample_unweighted(sizes, probs, seed);
}

ReplicateRecord run_replicate(const ScenarioSpec& spec, int replicate, const RunOptions& options) {
    ReplicateRecord rec;
    rec.scenario_id = spec.id;
    rec.replicate = replicate;
    rec.seed = replicate_seed(spec, replicate);
    rec.k_true = spec.k_true;
    rec.n = spec.n;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto sampled = generate_network(spec, rec.seed);
        SelectOptions select;
        select.k_max = spec.k_max;
        select.kmeans = options.kmeans;
        auto sel = select_k(sampled.graph, rng::derive(rec.seed, kClusteringStream), select);
        rec.selected_k = sel.best_k;
        rec.ari = adjusted_rand_index(sel.assignment, sampled.truth);
        rec.curve = std::move(sel.curve);
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    if (options.record_timing) {
        rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return rec;
}

std::vector<ReplicateRecord> run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
    validate(spec);
    std::vector<ReplicateRecord> records(static_cast<std::size_t>(spec.replicates));
    parallel_for(records.size(), options.jobs, [&](std::size_t r) {
        records[r] = run_replicate(spec, static_cast<int>(r), options);
    });
    return records;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw AggregationError("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ScenarioSummary aggregate(const std::vector<ReplicateRecord>& records, int k_true) {
    ScenarioSummary s;
    std::vector<double> aris;
    std::size_t correct = 0;
    for (const auto& r : records) {
        if (r.error) {
            ++s.failed;
            continue;
        }
        ++s.k_histogram[r.selected_k];
        correct += r.selected_k == k_true ? 1 : 0;
        aris.push_back(r.ari);
    }
    if (aris.empty()) {
        throw AggregationError("all " + std::to_string(records.size()) + " replicates failed");
    }
    s.replicates = aris.size();
    s.proportion_correct = static_cast<double>(correct) / static_cast<double>(s.replicates);
    s.ari_median = quantile(aris, 0.5);
    s.ari_q1 = quantile(aris, 0.25);
    s.ari_q3 = quantile(aris, 0.75);
    return s;
}

bool SuiteResult::ok() const {
    return std::all_of(scenarios.begin(), scenarios.end(), [](const ScenarioOutcome& o) { return o.ok; });
}

std::string replicates_csv(const std::vector<ReplicateRecord>& records) {
    std::ostringstream out;
    out << "scenario_id,replicate,seed,selected_k,ari,k_true,n,runtime_ms\n";
    for (const auto& r : records) {
        out << r.scenario_id << ',' << r.replicate << ',' << r.seed << ',';
        if (!r.error) {
            out << r.selected_k << ',' << format_double(r.ari);
        } else {
            out << ',';
        }
        out << ',' << r.k_true << ',' << r.n << ',';
        if (r.runtime_ms) {
            out << format_double(std::round(*r.runtime_ms * 1000.0) / 1000.0);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string curves_csv(const std::vector<ReplicateRecord>& records) {
    std::ostringstream out;
    out << "scenario_id,replicate,k,silhouette\n";
    for (const auto& r : records) {
        for (const auto& [k, s] : r.curve) {
            out << r.scenario_id << ',' << r.replicate << ',' << k << ',' << format_double(s) << '\n';
        }
    }
    return out.str();
}

std::string failures_text(const std::vector<ReplicateRecord>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        if (r.error) {
            out << r.scenario_id << " replicate " << r.replicate << ": " << *r.error << '\n';
        }
    }
    return out.str();
}

std::string summary_line(const ScenarioOutcome& o) {
    std::ostringstream line;
    line << o.spec.id << ": ";
    if (!o.summary) {
        line << "FAILED (" << o.failed << " of " << o.spec.replicates << " replicates failed)";
        return line.str();
    }
    const auto& s = *o.summary;
    char buf[160];
    std::snprintf(buf, sizeof buf, "R=%zu prop_correct=%.3f ari_median=%.3f ari_iqr=[%.3f, %.3f]", s.replicates,
                  s.proportion_correct, s.ari_median, s.ari_q1, s.ari_q3);
    line << buf << " modal_k=";
    const auto modal = std::max_element(s.k_histogram.begin(), s.k_histogram.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    line << modal->first;
    if (o.failed > 0) {
        line << " failed=" << o.failed;
    }
    if (!o.ok) {
        line << " FAILED";
    }
    return line.str();
}

void check_writable_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    const auto probe = dir / ".silnet-write-probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw IoError("output directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

} // namespace

std::string summary_csv(const std::vector<ScenarioOutcome>& outcomes) {
    std::ostringstream out;
    out << "scenario_id,n,k_true,profile,p_win,p_btw,p_tilde,w_win,w_btw,fully_connected,R,prop_correct,"
           "ari_median,ari_q1,ari_q3\n";
    for (const auto& o : outcomes) {
        const auto& s = o.spec;
        const bool sbm = s.generator == GeneratorKind::Sbm;
        out << s.id << ',' << s.n << ',' << s.k_true << ','
            << (s.profile.kind == ProfileKind::Equal ? "EQ" : "NE") << ','
            << (sbm && !s.fully_connected ? format_double(s.p_win) : "") << ','
            << (sbm && !s.fully_connected ? format_double(s.p_btw) : "") << ','
            << (s.weak_pair ? format_double(s.weak_pair->p) : "") << ',' << dist_text(s.w_win) << ','
            << dist_text(s.w_btw) << ',' << (s.fully_connected ? "true" : "false") << ',';
        if (o.summary) {
            const auto& m = *o.summary;
            out << m.replicates << ',' << format_double(m.proportion_correct) << ','
                << format_double(m.ari_median) << ',' << format_double(m.ari_q1) << ','
                << format_double(m.ari_q3);
        } else {
            out << "0,,,,";
        }
        out << '\n';
    }
    return out.str();
}

json suite_manifest(const std::vector<ScenarioSpec>& specs) {
    json scenarios = json::array();
    json seeds = json::array();
    for (const auto& s : specs) {
        scenarios.push_back(to_json(s));
        seeds.push_back({{"id", s.id}, {"master_seed", s.master_seed}});
    }
    return {{"software", "silnet"},
            {"version", std::string(kVersion)},
            {"rng", std::string(rng::kGeneratorId)},
            {"quantile", "linear interpolation (type 7)"},
            {"scenarios", std::move(scenarios)},
            {"seeds", std::move(seeds)}};
}

std::vector<ScenarioSpec> specs_from_manifest(const json& manifest) {
    if (!manifest.contains("scenarios")) {
        throw ConfigError("manifest has no 'scenarios' list");
    }
    return suite_from_json(manifest.at("scenarios"));
}

SuiteResult run_suite(std::vector<ScenarioSpec> specs, const std::filesystem::path& out_dir,
                      const SuiteOptions& options) {
    if (specs.empty()) {
        throw ConfigError("suite contains no scenarios");
    }
    std::set<std::string> ids;
    for (auto& s : specs) {
        if (options.replicates_override) {
            s.replicates = *options.replicates_override;
        }
        validate(s);
        if (!ids.insert(s.id).second) {
            throw ConfigError("duplicate scenario id '" + s.id + "'");
        }
    }
    check_writable_dir(out_dir);

    struct Task {
        std::size_t scenario;
        int replicate;
    };
    std::vector<Task> tasks;
    std::vector<std::size_t> offset(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        offset[s] = tasks.size();
        for (int r = 0; r < specs[s].replicates; ++r) {
            tasks.push_back({s, r});
        }
    }

    std::vector<ReplicateRecord> records(tasks.size());
    std::vector<std::atomic<int>> remaining(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        remaining[s] = specs[s].replicates;
    }
    std::atomic<std::size_t> finished_scenarios{0};
    std::mutex log_mutex;
    RunOptions run;
    run.record_timing = options.record_timing;
    run.kmeans = options.kmeans;

    parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
        const auto& task = tasks[t];
        records[t] = run_replicate(specs[task.scenario], task.replicate, run);
        if (--remaining[task.scenario] == 0 && options.log) {
            const auto done = ++finished_scenarios;
            std::lock_guard lock(log_mutex);
            options.log("finished " + specs[task.scenario].id + " (" + std::to_string(done) + "/" +
                        std::to_string(specs.size()) + ")");
        }
    });

    SuiteResult result;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto first = records.begin() + static_cast<std::ptrdiff_t>(offset[s]);
        std::vector<ReplicateRecord> mine(first, first + specs[s].replicates);
        ScenarioOutcome outcome{specs[s], std::nullopt, 0, true, {}};
        outcome.failed = static_cast<std::size_t>(
            std::count_if(mine.begin(), mine.end(), [](const ReplicateRecord& r) { return r.error.has_value(); }));
        try {
            outcome.summary = aggregate(mine, specs[s].k_true);
        } catch (const AggregationError&) {
            outcome.ok = false;
        }
        if (outcome.failed * 100 > static_cast<std::size_t>(specs[s].replicates)) {
            outcome.ok = false;
        }
        outcome.line = summary_line(outcome);
        result.scenarios.push_back(std::move(outcome));
    }

    write_file_atomically(out_dir / "replicates.csv", replicates_csv(records));
    write_file_atomically(out_dir / "curves.csv", curves_csv(records));
    write_file_atomically(out_dir / "summary.csv", summary_csv(result.scenarios));
    write_file_atomically(out_dir / "suite.json", suite_manifest(specs).dump(2) + "\n");
    const auto failures = failures_text(records);
    if (!failures.empty()) {
        write_file_atomically(out_dir / "failures.txt", failures);
    } else {
        std::error_code ec;
        std::filesystem::remove(out_dir / "failures.txt", ec);
    }
    return result;
}

} // namespace silnet
