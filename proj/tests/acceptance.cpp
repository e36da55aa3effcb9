// Acceptance suite: one PASS/FAIL line per criterion.
//
//   silnet_acceptance [--jobs N] [criterion ...]
//
// With no criteria every one (1-9) runs. Exit status is 0 only if all
// requested criteria pass.

#include "oracles.hpp"

#include "silnet/airline.hpp"
#include "silnet/harness.hpp"
#include "silnet/metrics.hpp"
#include "silnet/spectral.hpp"
#include "silnet/workflows.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace silnet;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

unsigned g_jobs = 1;

ScenarioSpec pick(const std::string& suite, const std::string& id) {
    for (auto& s : builtin_suite(suite)) {
        if (s.id == id) return s;
    }
    throw std::runtime_error("scenario " + id + " missing from " + suite);
}

ScenarioSummary run_cell(const ScenarioSpec& spec, Outcome& out) {
    RunOptions opt;
    opt.jobs = g_jobs;
    const auto records = run_scenario(spec, opt);
    const auto s = aggregate(records, spec.k_true);
    out.check(s.failed == 0, spec.id + ": " + std::to_string(s.failed) + " failed replicates");
    return s;
}

std::string hist(const ScenarioSummary& s) {
    std::string h;
    for (const auto& [k, c] : s.k_histogram) h += (h.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(c);
    return "{" + h + "}";
}

Outcome criterion1() {
    Outcome out;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20260101);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto n = static_cast<std::size_t>(1 + rng() % 12);
        const auto a = oracle::random_labels(rng, n, 1 + static_cast<int>(rng() % n));
        const auto b = oracle::random_labels(rng, n, 1 + static_cast<int>(rng() % n));
        mismatches += adjusted_rand_index(a, b) != oracle::pair_count_ari(a, b);
    }
    out.check(mismatches == 0, "ARI equals pair-count oracle on 1000 pairs (mismatches=" +
                                   std::to_string(mismatches) + ")");
    Eigen::MatrixXd d(4, 4);
    d << 0, 0.2, 0.6, 0.6, 0.2, 0, 0.6, 0.6, 0.6, 0.6, 0, 0.4, 0.6, 0.6, 0.4, 0;
    const auto r = silhouette(DistanceMatrix(d), ClusterAssignment({0, 0, 1, 1}, 2));
    const double expect[] = {2.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 3};
    double err = std::abs(r.global - 0.5);
    for (Eigen::Index i = 0; i < 4; ++i) err = std::max(err, std::abs(r.per_node(i) - expect[i]));
    out.check(err <= 1e-12, "four-node silhouette fixture, max error " + fmt(err, 17));
    const double secs = seconds_since(t0);
    out.check(secs < 5.0, "runtime " + fmt(secs, 2) + " s < 5 s");
    return out;
}

Outcome criterion2() {
    Outcome out;
    Eigen::MatrixXd k3 = Eigen::MatrixXd::Ones(3, 3);
    k3.diagonal().setZero();
    const auto ev = spectral_embedding(WeightedGraph(k3), 3).eigenvalues;
    const double err = std::max({std::abs(ev(0)), std::abs(ev(1) - 1.5), std::abs(ev(2) - 1.5)});
    out.check(err <= 1e-8, "K_3 eigenvalues {0,1.5,1.5}, max error " + fmt(err, 17));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    int wrong = 0;
    for (int t = 0; t < 100; ++t) {
        const int comps = 2 + static_cast<int>(rng() % 5);
        std::vector<int> sizes;
        int n = 0;
        for (int c = 0; c < comps; ++c) {
            sizes.push_back(2 + static_cast<int>(rng() % 10));
            n += sizes.back();
        }
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
        int off = 0;
        for (int s : sizes) {
            for (int i = 0; i + 1 < s; ++i) w(off + i, off + i + 1) = w(off + i + 1, off + i) = u(rng);
            for (int i = 0; i < s; ++i)
                for (int j = i + 2; j < s; ++j)
                    if (rng() % 3 == 0) w(off + i, off + j) = w(off + j, off + i) = u(rng);
            off += s;
        }
        const int truth = oracle::component_count(w);
        const auto e = spectral_embedding(WeightedGraph(w), n).eigenvalues;
        int zeros = 0;
        for (Eigen::Index i = 0; i < e.size(); ++i) zeros += std::abs(e(i)) < 1e-8;
        wrong += zeros != truth;
    }
    out.check(wrong == 0, "zero-eigenvalue count equals component count on 100 graphs (wrong=" +
                              std::to_string(wrong) + ")");
    return out;
}

struct Bound {
    std::string suite;
    std::string id;
    double lo;
    double hi;
    std::string paper;
};

Outcome proportion_checks(const std::vector<Bound>& bounds, double budget_s) {
    Outcome out;
    const auto t0 = Clock::now();
    for (const auto& b : bounds) {
        const auto spec = pick(b.suite, b.id);
        const auto s = run_cell(spec, out);
        out.check(s.proportion_correct >= b.lo && s.proportion_correct <= b.hi,
                  b.id + ": prop_correct=" + fmt(s.proportion_correct) + " in [" + fmt(b.lo, 2) + ", " +
                      fmt(b.hi, 2) + "] (reference " + b.paper + ", R=" + std::to_string(spec.replicates) +
                      ") K histogram " + hist(s));
    }
    const double secs = seconds_since(t0);
    out.check(secs < budget_s, "runtime " + fmt(secs, 1) + " s < " + fmt(budget_s, 0) + " s");
    return out;
}

Outcome criterion3() {
    return proportion_checks({{"table2_desk", "t2_n600_k3_EQ_pw0.5_pb0.1", 0.95, 1.0, "1"},
                              {"table2_desk", "t2_n240_k3_EQ_pw0.3_pb0.05", 0.80, 1.0, "0.94"},
                              {"table2_desk", "t2_n240_k3_NE_pw0.3_pb0.05", 0.0, 0.05, "0"},
                              {"table2_desk", "t2_n240_k8_EQ_pw0.3_pb0.05", 0.0, 0.15, "0.03"}},
                             600.0);
}

Outcome criterion4() {
    return proportion_checks({{"table3_desk", "t3_n240_EQ_pw0.3_pt0.1", 0.60, 0.90, "0.74"},
                              {"table3_desk", "t3_n240_EQ_pw0.3_pt0.15", 0.0, 0.10, "0.02"}},
                             600.0);
}

Outcome criterion5() {
    Outcome out;
    const auto spec = pick("weighted_desk", "w_n240_EQ_pw0.6_pb0.1_wb0-0.2");
    out.check(spec.w_win == WeightDistribution::uniform(0.5, 1.0) && spec.w_btw == WeightDistribution::uniform(0.0, 0.2) &&
                  spec.k_true == 3 && spec.replicates == 50,
              "scenario parameters");
    const auto s = run_cell(spec, out);
    out.check(s.proportion_correct >= 0.95, "prop_correct=" + fmt(s.proportion_correct) + " >= 0.95");
    out.check(s.ari_median >= 0.99, "ARI median=" + fmt(s.ari_median, 4) + " >= 0.99");
    return out;
}

Outcome criterion6() {
    Outcome out;
    for (const char* id : {"fc_n240_EQ_wb0.3-0.5", "fc_n240_NE_wb0.3-0.5"}) {
        const auto spec = pick("fully_connected_desk", id);
        RunOptions opt;
        opt.jobs = g_jobs;
        const auto records = run_scenario(spec, opt);
        const auto s = aggregate(records, spec.k_true);
        std::size_t perfect = 0;
        for (const auto& r : records) perfect += !r.error && r.ari == 1.0;
        out.check(s.failed == 0 && s.proportion_correct == 1.0,
                  std::string(id) + ": prop_correct=" + fmt(s.proportion_correct) + " == 1 " + hist(s));
        out.check(perfect == records.size(), std::string(id) + ": ARI == 1 in " + std::to_string(perfect) + "/" +
                                                 std::to_string(records.size()) + " replicates");
    }
    return out;
}

Outcome criterion7() {
    Outcome out;
    fs::path dir = SILNET_SOURCE_DIR "/data/airline";
    if (const char* env = std::getenv("SILNET_AIRLINE_DIR")) dir = env;
    const auto edges = dir / "edges.txt";
    const auto meta = dir / "cities.csv";
    if (!fs::exists(edges) || !fs::exists(meta)) {
        out.check(false, "airline dataset not found (expected " + edges.string() + " and " + meta.string() +
                             "; set SILNET_AIRLINE_DIR)");
        return out;
    }
    const auto t0 = Clock::now();
    const auto outdir = fs::temp_directory_path() / "silnet_acceptance_airline";
    SelectOptions opt;
    opt.jobs = g_jobs;
    const auto rep = airline::run_case_study(edges, meta, outdir, airline::kDefaultSeed, opt);
    out.check(rep.nodes == 456, "nodes=" + std::to_string(rep.nodes) + " == 456");
    out.check(rep.edges == 34011, "edges=" + std::to_string(rep.edges) + " == 34011");
    out.check(rep.best_k == 5, "best_k=" + std::to_string(rep.best_k) + " == 5");
    const std::size_t sizes[] = {141, 103, 96, 76, 40};
    const double dens[] = {60, 60, 45, 51, 52};
    if (rep.best_k == 5) {
        for (int c = 0; c < 5; ++c) {
            const auto got = rep.cluster_sizes[static_cast<std::size_t>(c)];
            const double gd = rep.diagonal_density[static_cast<std::size_t>(c)];
            out.check(std::abs(static_cast<double>(got) - static_cast<double>(sizes[c])) <= 15,
                      "cluster " + std::to_string(c) + " size " + std::to_string(got) + " within 15 of " +
                          std::to_string(sizes[c]));
            out.check(std::abs(gd - dens[c]) <= 5.0, "cluster " + std::to_string(c) + " density " + fmt(gd, 1) +
                                                         "% within 5 of " + fmt(dens[c], 0) + "%");
        }
    }
    const double secs = seconds_since(t0);
    out.check(secs < 120.0, "runtime " + fmt(secs, 1) + " s < 120 s");
    return out;
}

Outcome criterion8() {
    Outcome out;
    const auto outdir = fs::temp_directory_path() / "silnet_acceptance_rings";
    SelectOptions opt;
    opt.jobs = g_jobs;
    const auto rep = run_rings(outdir, RingsConfig{}, opt);
    out.check(rep.best_k >= 10, "best_k=" + std::to_string(rep.best_k) + " >= 10 (ARI " + fmt(rep.ari) + ")");
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion9() {
    Outcome out;
    // a slice of the unweighted grid plus weighted and fully connected cells
    std::vector<ScenarioSpec> specs;
    for (const auto& s : builtin_suite("table2_desk"))
        if (s.n == 240 && s.p_win == 0.3) specs.push_back(s);
    specs.push_back(pick("weighted_desk", "w_n240_NE_pw0.3_pb0.1_wb0.3-0.5"));
    specs.push_back(pick("fully_connected_desk", "fc_n240_NE_wb0.6-0.8"));
    SuiteOptions o1;
    o1.replicates_override = 4;
    o1.jobs = 1;
    SuiteOptions o8 = o1;
    o8.jobs = 8;
    const auto base = fs::temp_directory_path() / "silnet_acceptance_determinism";
    fs::remove_all(base);
    run_suite(specs, base / "j1", o1);
    run_suite(specs, base / "j8", o8);
    run_suite(specs, base / "j1b", o1);
    const auto a = slurp(base / "j1" / "replicates.csv");
    out.check(!a.empty() && a == slurp(base / "j8" / "replicates.csv"),
              "replicates.csv byte-identical at jobs 1 and 8 (" + std::to_string(specs.size()) + " scenarios, " +
                  std::to_string(a.size()) + " bytes)");
    out.check(a == slurp(base / "j1b" / "replicates.csv"), "replicates.csv byte-identical on rerun");
    out.check(slurp(base / "j1" / "curves.csv") == slurp(base / "j8" / "curves.csv") &&
                  slurp(base / "j1" / "summary.csv") == slurp(base / "j8" / "summary.csv"),
              "curves.csv and summary.csv identical at jobs 1 and 8");
    fs::remove_all(base);
    return out;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
        {"metric oracles", criterion1},
        {"spectral correctness", criterion2},
        {"unweighted spot checks", criterion3},
        {"weak-pair spot checks", criterion4},
        {"weighted regime", criterion5},
        {"fully connected regime", criterion6},
        {"airline case study", criterion7},
        {"concentric rings overestimation", criterion8},
        {"determinism across parallelism", criterion9},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc) {
            g_jobs = static_cast<unsigned>(std::max(1, std::atoi(argv[++i])));
        } else if (arg == "--help") {
            std::cout << "usage: silnet_acceptance [--jobs N] [criterion 1-9 ...]\n";
            return 0;
        } else {
            const int c = std::atoi(arg.c_str());
            if (c < 1 || c > static_cast<int>(criteria().size())) {
                std::cerr << "unknown criterion '" << arg << "'\n";
                return 2;
            }
            selected.push_back(c);
        }
    }
    if (selected.empty()) {
        for (int c = 1; c <= static_cast<int>(criteria().size()); ++c) selected.push_back(c);
    }

    int failed = 0;
    for (int c : selected) {
        const auto& [name, fn] = criteria()[static_cast<std::size_t>(c - 1)];
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        for (const auto& n : out.notes) std::cout << "    " << n << "\n";
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c << " (" << name << ") ["
                  << fmt(seconds_since(t0), 1) << " s]" << std::endl;
        failed += !out.pass;
    }
    return failed == 0 ? 0 : 1;
}
