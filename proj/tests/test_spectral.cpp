#include "oracles.hpp"

#include "silnet/error.hpp"
#include "silnet/metrics.hpp"
#include "silnet/rng.hpp"
#include "silnet/sbm.hpp"
#include "silnet/spectral.hpp"

#include <gtest/gtest.h>

using namespace silnet;

namespace {

Eigen::MatrixXd two_cliques(int a, int b) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(a + b, a + b);
    w.topLeftCorner(a, a).setOnes();
    w.bottomRightCorner(b, b).setOnes();
    w.diagonal().setZero();
    return w;
}

// Union of random dense blocks with no edges between them.
Eigen::MatrixXd random_components(std::mt19937_64& rng, int comps) {
    std::vector<int> sizes;
    int n = 0;
    for (int c = 0; c < comps; ++c) {
        sizes.push_back(2 + static_cast<int>(rng() % 6));
        n += sizes.back();
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    int off = 0;
    for (int s : sizes) {
        // path keeps each block connected, extra chords add variety
        for (int i = 0; i + 1 < s; ++i) w(off + i, off + i + 1) = w(off + i + 1, off + i) = u(rng);
        for (int i = 0; i < s; ++i)
            for (int j = i + 2; j < s; ++j)
                if (rng() % 2) w(off + i, off + j) = w(off + j, off + i) = u(rng);
        off += s;
    }
    return w;
}

} // namespace

TEST(Laplacian, CompleteGraphSpectrum) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Ones(3, 3);
    w.diagonal().setZero();
    const auto emb = spectral_embedding(WeightedGraph(w), 3);
    EXPECT_NEAR(emb.eigenvalues(0), 0.0, 1e-12);
    EXPECT_NEAR(emb.eigenvalues(1), 1.5, 1e-12);
    EXPECT_NEAR(emb.eigenvalues(2), 1.5, 1e-12);
    const auto ref = oracle::jacobi_eigenvalues(normalized_laplacian(WeightedGraph(w)));
    EXPECT_NEAR(ref[1], 1.5, 1e-12);
}

TEST(Laplacian, MatchesDefinitionAndJacobi) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd w = oracle::random_symmetric(rng, 12, 0.0, 1.0);
        for (Eigen::Index i = 0; i < 12; ++i)
            for (Eigen::Index j = i + 1; j < 12; ++j)
                if (rng() % 3 == 0) w(i, j) = w(j, i) = 0.0;
        const WeightedGraph g(w);
        const auto l = normalized_laplacian(g);
        EXPECT_LT((l - oracle::laplacian(w)).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_EQ(l, l.transpose());
        const auto emb = spectral_embedding(g, 12);
        const auto ref = oracle::jacobi_eigenvalues(l);
        for (int i = 0; i < 12; ++i) {
            EXPECT_NEAR(emb.eigenvalues(i), ref[static_cast<std::size_t>(i)], 1e-10);
            EXPECT_GE(emb.eigenvalues(i), -1e-8);
            EXPECT_LE(emb.eigenvalues(i), 2 + 1e-8);
        }
    }
}

TEST(Laplacian, IsolatedNodeConvention) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(0, 1) = w(1, 0) = 0.5;
    const auto l = normalized_laplacian(WeightedGraph(w));
    EXPECT_EQ(l(2, 2), 1.0);
    EXPECT_EQ(l(2, 0), 0.0);
    EXPECT_EQ(l(1, 2), 0.0);
    EXPECT_EQ(l(0, 0), 1.0);
}

TEST(LaplacianProperty, ZeroEigenvaluesCountComponents) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
        const int comps = 1 + static_cast<int>(rng() % 5);
        const auto w = random_components(rng, comps);
        ASSERT_EQ(oracle::component_count(w), comps);
        const auto emb = spectral_embedding(WeightedGraph(w), static_cast<int>(w.rows()));
        int zeros = 0;
        for (Eigen::Index i = 0; i < emb.eigenvalues.size(); ++i) zeros += std::abs(emb.eigenvalues(i)) < 1e-8;
        EXPECT_EQ(zeros, comps);
    }
}

TEST(Embedding, TwoCliqueIndicators) {
    const auto emb = spectral_embedding(WeightedGraph(two_cliques(4, 6)), 2);
    const Eigen::MatrixXd x = row_normalize(emb.vectors);
    // rows of each clique collapse to one point, distinct between cliques
    for (int i = 1; i < 4; ++i) EXPECT_LT((x.row(i) - x.row(0)).norm(), 1e-10);
    for (int i = 5; i < 10; ++i) EXPECT_LT((x.row(i) - x.row(4)).norm(), 1e-10);
    EXPECT_GT((x.row(0) - x.row(4)).norm(), 1.0);
}

TEST(Embedding, OrthonormalAndSignConvention) {
    std::mt19937_64 rng(4);
    const WeightedGraph g(oracle::random_symmetric(rng, 30, 0.0, 1.0));
    const auto emb = spectral_embedding(g, 6);
    EXPECT_LT((emb.vectors.transpose() * emb.vectors - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(),
              1e-8);
    for (Eigen::Index c = 0; c < 6; ++c) {
        Eigen::Index idx = 0;
        emb.vectors.col(c).cwiseAbs().maxCoeff(&idx);
        EXPECT_GT(emb.vectors(idx, c), 0.0);
    }
    for (Eigen::Index i = 1; i < 6; ++i) EXPECT_LE(emb.eigenvalues(i - 1), emb.eigenvalues(i));
}

TEST(Embedding, SliceEqualsFreshSolve) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 5; ++t) {
        const WeightedGraph g(oracle::random_symmetric(rng, 20, 0.0, 1.0));
        const auto big = spectral_embedding(g, 10);
        for (int k : {2, 3, 5}) {
            const auto fresh = spectral_embedding(g, k);
            EXPECT_LT((big.vectors.leftCols(k) - fresh.vectors).cwiseAbs().maxCoeff(), 1e-10);
            // independent solve, signs fixed the same way
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::laplacian(g.weights()));
            Eigen::MatrixXd v = es.eigenvectors().leftCols(k);
            apply_sign_convention(v);
            EXPECT_LT((big.vectors.leftCols(k) - v).cwiseAbs().maxCoeff(), 1e-8);
        }
    }
}

TEST(Embedding, Deterministic) {
    std::mt19937_64 rng(13);
    const WeightedGraph g(oracle::random_symmetric(rng, 25, 0.0, 1.0));
    EXPECT_EQ(spectral_embedding(g, 5).vectors, spectral_embedding(g, 5).vectors);
}

TEST(Embedding, RangeChecks) {
    const WeightedGraph g(two_cliques(2, 2));
    EXPECT_THROW(spectral_embedding(g, 0), ConfigError);
    EXPECT_THROW(spectral_embedding(g, 5), ConfigError);
}

TEST(RowNormalize, Rows) {
    Eigen::MatrixXd x(2, 2);
    x << 3, 4, 0, 0;
    const auto y = row_normalize(x);
    EXPECT_DOUBLE_EQ(y(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(y(0, 1), 0.8);
    EXPECT_EQ(y(1, 0), 0.0);
    EXPECT_EQ(y(1, 1), 0.0);
}

TEST(KMeans, EveryPointOwnCluster) {
    std::mt19937_64 rng(1);
    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(7, 3);
    const auto r = kmeans(pts, 7, 5);
    EXPECT_EQ(r.assignment.k(), 7);
    EXPECT_EQ(r.objective, 0.0);
    auto sizes = r.assignment.cluster_sizes();
    EXPECT_TRUE(std::all_of(sizes.begin(), sizes.end(), [](auto s) { return s == 1; }));
}

TEST(KMeans, SeparatedGaussians) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd(0.0, 0.3);
    Eigen::MatrixXd pts(100, 2);
    std::vector<int> truth(100);
    for (int i = 0; i < 100; ++i) {
        const double cx = i < 50 ? -5.0 : 5.0;
        pts(i, 0) = cx + nd(rng);
        pts(i, 1) = nd(rng);
        truth[static_cast<std::size_t>(i)] = i < 50;
    }
    const auto r = kmeans(pts, 2, 3);
    EXPECT_EQ(adjusted_rand_index(r.assignment.labels(), truth), 1.0);
}

TEST(KMeans, FixedPointAndObjective) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXd pts = Eigen::MatrixXd::Random(60, 4);
        const auto r = kmeans(pts, 5, static_cast<std::uint64_t>(t));
        EXPECT_NEAR(r.objective, kmeans_objective(pts, r.assignment), 1e-10);
        const auto next = lloyd_step(pts, r.assignment);
        EXPECT_LE(r.objective, kmeans_objective(pts, next) + 1e-12);
    }
}

TEST(KMeans, DuplicatePointsStillNonEmpty) {
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(10, 2);
    pts(9, 0) = 1.0;
    const auto r = kmeans(pts, 4, 1);
    for (auto s : r.assignment.cluster_sizes()) EXPECT_GE(s, 1u);
}

TEST(KMeans, Errors) {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Random(3, 2);
    EXPECT_THROW(kmeans(pts, 4, 1), ConfigError);
    EXPECT_THROW(kmeans(pts, 0, 1), ConfigError);
}

TEST(ClusterWithK, SeparatedSbm) {
    const std::vector<std::size_t> sizes{80, 80, 80};
    const auto s = sample_unweighted(sizes, build_prob_matrix(3, 0.5, 0.1), 101);
    const auto emb = spectral_embedding(s.graph, 20);
    const auto r3 = cluster_with_k(s.graph, emb, 3, 9);
    const auto r2 = cluster_with_k(s.graph, emb, 2, 9);
    EXPECT_EQ(adjusted_rand_index(r3.assignment, s.truth), 1.0);
    EXPECT_LT(r2.silhouette, r3.silhouette);
}

TEST(ClusterWithK, TinyGraphSmoke) {
    Eigen::MatrixXd w = two_cliques(2, 2);
    const WeightedGraph g(w);
    const auto r = cluster_with_k(g, spectral_embedding(g, 2), 2, 1);
    EXPECT_EQ(r.assignment.k(), 2);
    EXPECT_TRUE(std::isfinite(r.silhouette));
}

TEST(SelectK, EqualSbmPicksThree) {
    const std::vector<std::size_t> sizes{200, 200, 200};
    const auto s = sample_unweighted(sizes, build_prob_matrix(3, 0.3, 0.05), 2026);
    const auto r = select_k(s.graph, 1);
    EXPECT_EQ(r.best_k, 3);
    ASSERT_EQ(r.curve.size(), 19u);
    EXPECT_EQ(r.curve.begin()->first, 2);
    EXPECT_EQ(r.curve.rbegin()->first, 20);
    for (const auto& [k, v] : r.curve) EXPECT_LE(v, r.curve.at(r.best_k));
}

TEST(SelectK, ParallelSweepMatchesSerial) {
    const std::vector<std::size_t> sizes{40, 40, 40};
    const auto s = sample_unweighted(sizes, build_prob_matrix(3, 0.4, 0.1), 55);
    SelectOptions serial;
    serial.k_max = 10;
    serial.keep_all_assignments = true;
    SelectOptions par = serial;
    par.jobs = 4;
    const auto a = select_k(s.graph, 8, serial);
    const auto b = select_k(s.graph, 8, par);
    EXPECT_EQ(a.best_k, b.best_k);
    EXPECT_EQ(a.curve, b.curve);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.per_k.size(), 9u);
}

TEST(SelectK, RangeValidation) {
    const WeightedGraph g(two_cliques(3, 3));
    SelectOptions o;
    o.k_max = 1;
    EXPECT_THROW(select_k(g, 1, o), ConfigError);
    o.k_max = 7;
    EXPECT_THROW(select_k(g, 1, o), ConfigError);
}
