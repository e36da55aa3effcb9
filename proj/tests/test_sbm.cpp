#include "silnet/error.hpp"
#include "silnet/rng.hpp"
#include "silnet/sbm.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace silnet;

TEST(Rng, DeriveIsStableAndSpreads) {
    EXPECT_EQ(rng::derive(1, 2), rng::derive(1, 2));
    EXPECT_NE(rng::derive(1, 2), rng::derive(2, 1));
    EXPECT_NE(rng::derive(1, 2), rng::derive(1, 3));
    // FNV-1a reference values
    EXPECT_EQ(rng::hash_string(""), 0xCBF29CE484222325ULL);
    EXPECT_EQ(rng::hash_string("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Rng, Uniform01Range) {
    auto e = rng::make_engine(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng::uniform01(e);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(AllocateSizes, ProfilesFromExamples) {
    EXPECT_EQ(allocate_sizes(240, 3, SizeProfile::imbalanced_default(3)),
              (std::vector<std::size_t>{192, 24, 24}));
    std::vector<std::size_t> ne8{156};
    ne8.insert(ne8.end(), 7, 12);
    EXPECT_EQ(allocate_sizes(240, 8, SizeProfile::imbalanced_default(8)), ne8);
    EXPECT_EQ(allocate_sizes(600, 3, SizeProfile::equal()), (std::vector<std::size_t>{200, 200, 200}));
}

TEST(AllocateSizes, LargestRemainder) {
    const auto eq = allocate_sizes(10, 3, SizeProfile::equal());
    EXPECT_EQ(eq, (std::vector<std::size_t>{4, 3, 3}));
    for (std::size_t n = 8; n < 300; n += 7) {
        for (int k : {3, 8}) {
            const auto s = allocate_sizes(n < 40 && k == 8 ? 40 : n, k, SizeProfile::equal());
            std::size_t total = 0;
            for (auto v : s) total += v;
            EXPECT_EQ(total, n < 40 && k == 8 ? 40 : n);
            EXPECT_LE(s.front() - s.back(), 1u);
            EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
        }
    }
    const auto ne = allocate_sizes(101, 3, SizeProfile::imbalanced_default(3));
    EXPECT_EQ(ne[0] + ne[1] + ne[2], 101u);
}

TEST(AllocateSizes, Errors) {
    EXPECT_THROW(allocate_sizes(2, 3, SizeProfile::equal()), ConfigError);
    EXPECT_THROW(allocate_sizes(10, 8, SizeProfile::imbalanced_default(8)), ConfigError);
    EXPECT_THROW(SizeProfile::imbalanced_default(5), ConfigError);
    EXPECT_THROW(SizeProfile::imbalanced(1.2), ConfigError);
}

TEST(BuildProbMatrix, WeakPairExample) {
    const auto p = build_prob_matrix(3, 0.3, 0.05, WeakPair{0, 1, 0.15});
    Eigen::MatrixXd expect(3, 3);
    expect << 0.3, 0.15, 0.05, 0.15, 0.3, 0.05, 0.05, 0.05, 0.3;
    EXPECT_EQ(p.matrix(), expect);
}

TEST(BuildProbMatrix, ConstantAndPlain) {
    const auto er = build_prob_matrix(2, 0.2, 0.2);
    EXPECT_TRUE((er.matrix().array() == 0.2).all());
    const auto plain = build_prob_matrix(4, 0.5, 0.1);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) EXPECT_EQ(plain(a, b), a == b ? 0.5 : 0.1);
    EXPECT_THROW(build_prob_matrix(3, 1.3, 0.1), ConfigError);
    EXPECT_THROW(build_prob_matrix(3, 0.3, 0.1, WeakPair{0, 3, 0.1}), ConfigError);
    EXPECT_THROW(build_prob_matrix(3, 0.3, 0.1, WeakPair{1, 1, 0.1}), ConfigError);
}

TEST(BlockProbMatrix, RejectsAsymmetric) {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(BlockProbMatrix{m}, ConfigError);
}

TEST(SampleUnweighted, ExtremeProbabilities) {
    const std::vector<std::size_t> sizes{5, 7};
    const auto full = sample_unweighted(sizes, build_prob_matrix(2, 1.0, 1.0), 1);
    EXPECT_EQ(full.graph.edge_count(), 12u * 11u / 2u);
    const auto empty = sample_unweighted(sizes, build_prob_matrix(2, 0.0, 0.0), 1);
    EXPECT_EQ(empty.graph.edge_count(), 0u);
    EXPECT_EQ(full.truth.cluster_sizes(), sizes);
}

TEST(SampleUnweighted, EdgeCountsWithinFourSd) {
    const std::vector<std::size_t> sizes{200, 200, 200};
    const auto s = sample_unweighted(sizes, build_prob_matrix(3, 0.5, 0.1), 20260101);
    std::size_t within = 0, between = 0;
    const auto& w = s.graph.weights();
    for (Eigen::Index i = 0; i < 600; ++i)
        for (Eigen::Index j = i + 1; j < 600; ++j)
            if (w(i, j) > 0) (s.truth[i] == s.truth[j] ? within : between) += 1;
    const double nw = 3.0 * 200 * 199 / 2;
    const double nb = 3.0 * 200 * 200;
    EXPECT_LE(std::abs(within - 0.5 * nw), 4 * std::sqrt(nw * 0.25));
    EXPECT_LE(std::abs(between - 0.1 * nb), 4 * std::sqrt(nb * 0.09));
}

TEST(SampleUnweighted, Deterministic) {
    const std::vector<std::size_t> sizes{30, 30};
    const auto p = build_prob_matrix(2, 0.4, 0.1);
    EXPECT_EQ(sample_unweighted(sizes, p, 5).graph.weights(), sample_unweighted(sizes, p, 5).graph.weights());
    EXPECT_NE(sample_unweighted(sizes, p, 5).graph.weights(), sample_unweighted(sizes, p, 6).graph.weights());
}

TEST(SampleWeighted, SupportsAndMoments) {
    const std::vector<std::size_t> sizes{80, 80, 80};
    const auto s = sample_weighted(sizes, build_prob_matrix(3, 0.6, 0.1), WeightDistribution::uniform(0.5, 1.0),
                                   WeightDistribution::uniform(0.0, 0.2), 17);
    double sum = 0;
    std::size_t cnt = 0;
    const auto& w = s.graph.weights();
    for (Eigen::Index i = 0; i < 240; ++i) {
        for (Eigen::Index j = i + 1; j < 240; ++j) {
            if (w(i, j) == 0) continue;
            if (s.truth[i] == s.truth[j]) {
                ASSERT_GE(w(i, j), 0.5);
                ASSERT_LE(w(i, j), 1.0);
                sum += w(i, j);
                ++cnt;
            } else {
                ASSERT_LE(w(i, j), 0.2);
            }
        }
    }
    const double sd = 0.5 / std::sqrt(12.0);
    EXPECT_LE(std::abs(sum / cnt - 0.75), 4 * sd / std::sqrt(static_cast<double>(cnt)));
}

TEST(SampleWeighted, DegenerateUniformMatchesUnweighted) {
    const std::vector<std::size_t> sizes{40, 20};
    const auto p = build_prob_matrix(2, 0.4, 0.1);
    const auto a = sample_weighted(sizes, p, WeightDistribution::constant_one(), WeightDistribution::constant_one(), 3);
    const auto b = sample_unweighted(sizes, p, 3);
    EXPECT_EQ(a.graph.weights(), b.graph.weights());
}

TEST(SampleFullyConnected, EveryPairPresent) {
    const std::vector<std::size_t> sizes{80, 80, 80};
    const auto s = sample_fully_connected(sizes, WeightDistribution::uniform(0.5, 1.0),
                                          WeightDistribution::uniform(0.6, 0.8), 4);
    EXPECT_EQ(s.graph.edge_count(), 28680u);
    double sum = 0;
    std::size_t cnt = 0;
    const auto& w = s.graph.weights();
    for (Eigen::Index i = 0; i < 240; ++i)
        for (Eigen::Index j = i + 1; j < 240; ++j)
            if (s.truth[i] != s.truth[j]) {
                ASSERT_GE(w(i, j), 0.6);
                ASSERT_LE(w(i, j), 0.8);
                sum += w(i, j);
                ++cnt;
            }
    const double sd = 0.2 / std::sqrt(12.0);
    EXPECT_LE(std::abs(sum / cnt - 0.7), 4 * sd / std::sqrt(static_cast<double>(cnt)));
}

TEST(WeightDistribution, Validation) {
    EXPECT_THROW(WeightDistribution::uniform(0.6, 0.5), ConfigError);
    EXPECT_THROW(WeightDistribution::uniform(-0.1, 0.5), ConfigError);
    EXPECT_THROW(WeightDistribution::uniform(0.1, 1.5), ConfigError);
    EXPECT_DOUBLE_EQ(WeightDistribution::uniform(0.6, 0.8).mean(), 0.7);
}
