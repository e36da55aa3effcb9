// Built-in scenario grids.

#include "silnet/error.hpp"
#include "silnet/harness.hpp"

#include <cstdio>
#include <string>
#include <utility>

namespace silnet {
namespace {

constexpr std::uint64_t kSuiteSeed = 20260101;
constexpr int kFullReplicates = 200;
constexpr int kDeskReplicates = 50;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const char* tag(ProfileKind k) { return k == ProfileKind::Equal ? "EQ" : "NE"; }

SizeProfile profile_for(ProfileKind kind, int k) {
    return kind == ProfileKind::Equal ? SizeProfile::equal() : SizeProfile::imbalanced_default(k);
}

ScenarioSpec base(std::string id, std::size_t n, int k, ProfileKind kind, int replicates) {
    ScenarioSpec s;
    s.id = std::move(id);
    s.n = n;
    s.k_true = k;
    s.profile = profile_for(kind, k);
    s.replicates = replicates;
    s.master_seed = kSuiteSeed;
    s.k_max = 20;
    return s;
}

constexpr std::size_t kSizes[] = {240, 600};
constexpr ProfileKind kProfiles[] = {ProfileKind::Equal, ProfileKind::Imbalanced};

// Checked (p_win, p_btw) cells of the unweighted design grid.
std::vector<std::pair<double, double>> unweighted_cells() {
    std::vector<std::pair<double, double>> cells;
    for (double pb : {0.05, 0.1, 0.15}) cells.emplace_back(0.3, pb);
    for (double pb : {0.1, 0.15, 0.2, 0.25}) cells.emplace_back(0.4, pb);
    for (double pb : {0.1, 0.15, 0.2, 0.25, 0.3, 0.35}) cells.emplace_back(0.5, pb);
    for (double pb : {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45}) cells.emplace_back(0.6, pb);
    return cells;
}

std::vector<ScenarioSpec> unweighted_grid(int r) {
    std::vector<ScenarioSpec> out;
    for (const auto& [pw, pb] : unweighted_cells()) {
        for (std::size_t n : kSizes) {
            for (int k : {3, 8}) {
                for (auto kind : kProfiles) {
                    auto s = base("t2_n" + std::to_string(n) + "_k" + std::to_string(k) + "_" + tag(kind) +
                                      "_pw" + num(pw) + "_pb" + num(pb),
                                  n, k, kind, r);
                    s.p_win = pw;
                    s.p_btw = pb;
                    out.push_back(std::move(s));
                }
            }
        }
    }
    return out;
}

// One weakly separated pair (the two smaller blocks), all other pairs at 0.05.
std::vector<ScenarioSpec> weak_pair_grid(int r) {
    const std::pair<double, std::vector<double>> rows[] = {{0.3, {0.1, 0.15, 0.2}},
                                                           {0.6, {0.3, 0.35, 0.4, 0.45}}};
    std::vector<ScenarioSpec> out;
    for (const auto& [pw, tildes] : rows) {
        for (double pt : tildes) {
            for (std::size_t n : kSizes) {
                for (auto kind : kProfiles) {
                    auto s = base("t3_n" + std::to_string(n) + "_" + tag(kind) + "_pw" + num(pw) + "_pt" + num(pt),
                                  n, 3, kind, r);
                    s.p_win = pw;
                    s.p_btw = 0.05;
                    s.weak_pair = WeakPair{1, 2, pt};
                    out.push_back(std::move(s));
                }
            }
        }
    }
    return out;
}

std::vector<WeightDistribution> between_weights(bool include_heaviest_overlap) {
    std::vector<WeightDistribution> out = {WeightDistribution::uniform(0.0, 0.2),
                                           WeightDistribution::uniform(0.3, 0.5),
                                           WeightDistribution::uniform(0.5, 0.7)};
    if (include_heaviest_overlap) {
        out.push_back(WeightDistribution::uniform(0.6, 0.8));
    }
    return out;
}

std::string dist_tag(const WeightDistribution& d) { return num(d.lo) + "-" + num(d.hi); }

std::vector<ScenarioSpec> weighted_grid(int r) {
    const std::pair<double, double> cells[] = {{0.3, 0.1}, {0.3, 0.2}, {0.6, 0.1}, {0.6, 0.5}};
    std::vector<ScenarioSpec> out;
    for (const auto& [pw, pb] : cells) {
        for (const auto& wb : between_weights(false)) {
            for (std::size_t n : kSizes) {
                for (auto kind : kProfiles) {
                    auto s = base("w_n" + std::to_string(n) + "_" + tag(kind) + "_pw" + num(pw) + "_pb" + num(pb) +
                                      "_wb" + dist_tag(wb),
                                  n, 3, kind, r);
                    s.p_win = pw;
                    s.p_btw = pb;
                    s.w_win = WeightDistribution::uniform(0.5, 1.0);
                    s.w_btw = wb;
                    out.push_back(std::move(s));
                }
            }
        }
    }
    return out;
}

std::vector<ScenarioSpec> fully_connected_grid(int r) {
    std::vector<ScenarioSpec> out;
    for (const auto& wb : between_weights(true)) {
        for (std::size_t n : kSizes) {
            for (auto kind : kProfiles) {
                auto s = base("fc_n" + std::to_string(n) + "_" + tag(kind) + "_wb" + dist_tag(wb), n, 3, kind, r);
                s.fully_connected = true;
                s.w_win = WeightDistribution::uniform(0.5, 1.0);
                s.w_btw = wb;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

std::vector<ScenarioSpec> rings_suite(int r) {
    auto s = base("rings_3x200", 600, 3, ProfileKind::Equal, r);
    s.generator = GeneratorKind::Rings;
    s.ring_counts = {200, 200, 200};
    s.ring_radii = {1.0, 2.0, 3.0};
    return {s};
}

using GridFn = std::vector<ScenarioSpec> (*)(int);

const std::pair<const char*, GridFn> kGrids[] = {
    {"table2", unweighted_grid},
    {"table3", weak_pair_grid},
    {"weighted", weighted_grid},
    {"fully_connected", fully_connected_grid},
    {"rings", rings_suite},
};

} // namespace

std::vector<std::string> builtin_suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : kGrids) {
        names.push_back(std::string(name) + "_desk");
        names.push_back(std::string(name) + "_full");
    }
    names.emplace_back("all_desk");
    names.emplace_back("all_full");
    return names;
}

std::vector<ScenarioSpec> builtin_suite(const std::string& name) {
    const auto cut = name.rfind('_');
    if (cut == std::string::npos) {
        throw ConfigError("unknown suite '" + name + "'");
    }
    const auto stem = name.substr(0, cut);
    const auto scale = name.substr(cut + 1);
    if (scale != "desk" && scale != "full") {
        throw ConfigError("unknown suite '" + name + "' (expected a _desk or _full suffix)");
    }
    const int r = scale == "desk" ? kDeskReplicates : kFullReplicates;
    std::vector<ScenarioSpec> out;
    for (const auto& [grid, fn] : kGrids) {
        if (stem == "all" || stem == grid) {
            auto part = fn(r);
            out.insert(out.end(), part.begin(), part.end());
        }
    }
    if (out.empty()) {
        throw ConfigError("unknown suite '" + name + "'");
    }
    return out;
}

} // namespace silnet
