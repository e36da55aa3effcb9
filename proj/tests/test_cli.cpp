#include "silnet/edgelist.hpp"
#include "silnet/sbm.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SILNET_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("silnet_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path separated_fixture(const fs::path& dir) {
    const std::vector<std::size_t> sizes{40, 40, 40};
    const auto s = silnet::sample_unweighted(sizes, silnet::build_prob_matrix(3, 0.6, 0.02), 314);
    const auto path = dir / "edges.txt";
    silnet::write_edge_list(path, s.graph);
    return path;
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST(Cli, VersionAndHelp) {
    const auto v = run("version");
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
    const auto h = run("cluster --help");
    EXPECT_EQ(h.code, 0);
    for (const char* flag : {"--edges", "--kmax", "--seed", "--out", "--jobs", "--emit-silhouette"})
        EXPECT_NE(h.out.find(flag), std::string::npos) << flag;
    const auto hs = run("simulate --help");
    for (const char* flag : {"--suite", "--config", "--out", "--replicates", "--jobs", "--seed", "--timing"})
        EXPECT_NE(hs.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("version --bogus").code, 2);
    EXPECT_EQ(run("rings --out x --unknown 3").code, 2);
    const auto missing = run("cluster --edges /nonexistent/e.txt");
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.out.find("/nonexistent/e.txt"), std::string::npos);
    const auto dir = scratch("usage");
    const auto edges = separated_fixture(dir);
    EXPECT_EQ(run("cluster --kmax 1 --edges " + edges.string()).code, 2);
    const auto badcfg = run("simulate --config /nonexistent/suite.json --out " + dir.string());
    EXPECT_EQ(badcfg.code, 2);
    EXPECT_NE(badcfg.out.find("/nonexistent/suite.json"), std::string::npos);
    EXPECT_EQ(run("simulate --suite nope --out " + dir.string()).code, 2);
    EXPECT_EQ(run("simulate --out " + dir.string()).code, 2);
    std::ofstream(dir / "bad.json") << "[{\"id\": 1}";
    EXPECT_EQ(run("simulate --config " + (dir / "bad.json").string() + " --out " + dir.string()).code, 2);
    std::ofstream(dir / "bad_edges.txt") << "a b 3.0\n";
    const auto parse = run("cluster --edges " + (dir / "bad_edges.txt").string());
    EXPECT_EQ(parse.code, 2);
    EXPECT_NE(parse.out.find(":1"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, ClusterSeparatedFixture) {
    const auto dir = scratch("cluster");
    const auto edges = separated_fixture(dir);
    const auto r = run("cluster --edges " + edges.string() + " --kmax 8 --seed 5 --emit-silhouette --out " +
                       (dir / "out").string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind("best_k=3\nk,silhouette\n2,", 0), 0u) << r.out;
    EXPECT_EQ(count_lines(dir / "out" / "curve.csv"), 8);
    EXPECT_EQ(count_lines(dir / "out" / "assignment.csv"), 121);
    EXPECT_TRUE(fs::exists(dir / "out" / "silhouette.json"));
    const auto again = run("cluster --edges " + edges.string() + " --kmax 8 --seed 5 --jobs 3");
    EXPECT_EQ(again.out.substr(0, 40), r.out.substr(0, 40));
    fs::remove_all(dir);
}

TEST(Cli, SimulateOverrideAndOutputs) {
    const auto dir = scratch("simulate");
    std::ofstream(dir / "suite.json")
        << R"([{"id":"a","n":60,"k_true":3,"p_win":0.6,"p_btw":0.05,"profile":"EQ","replicates":50,)"
        << R"("master_seed":1,"k_max":5},{"id":"b","n":60,"k_true":2,"p_win":0.6,"p_btw":0.05,"profile":"EQ",)"
        << R"("replicates":50,"master_seed":1,"k_max":5}])";
    const auto r = run("simulate --config " + (dir / "suite.json").string() + " --replicates 5 --jobs 2 --out " +
                       (dir / "out").string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("a: R=5"), std::string::npos) << r.out;
    EXPECT_EQ(count_lines(dir / "out" / "replicates.csv"), 1 + 2 * 5);
    EXPECT_TRUE(fs::exists(dir / "out" / "summary.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "suite.json"));
    fs::remove_all(dir);
}

TEST(Cli, SuitesWritesConfigs) {
    const auto dir = scratch("suites");
    const auto r = run("suites --write " + dir.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("table2_desk"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "table2_desk.json"));
    fs::remove_all(dir);
}

TEST(Cli, AirlineMissingFilesExitTwo) {
    EXPECT_EQ(run("airline --edges /nonexistent/a --meta /nonexistent/b --out /tmp/x").code, 2);
}
