#include "silnet/spectral.hpp"

#include "silnet/error.hpp"
#include "silnet/metrics.hpp"
#include "silnet/parallel.hpp"
#include "silnet/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace silnet {

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g) {
    const Eigen::VectorXd strength = g.strengths();
    const Eigen::Index n = strength.size();
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        inv_sqrt(i) = strength(i) > 0.0 ? 1.0 / std::sqrt(strength(i)) : 0.0;
    }
    Eigen::MatrixXd lap = -(inv_sqrt.asDiagonal() * g.weights() * inv_sqrt.asDiagonal());
    for (Eigen::Index i = 0; i < n; ++i) {
        lap(i, i) = 1.0;
    }
    // The diagonal scaling is symmetric in exact arithmetic; make it so
    // bitwise before handing the matrix to a symmetric solver.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            lap(j, i) = lap(i, j);
        }
    }
    return lap;
}

void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double m = std::abs(vectors(r, c));
            if (m > best) {
                best = m;
                arg = r;
            }
        }
        if (vectors.rows() > 0 && vectors(arg, c) < 0.0) {
            vectors.col(c) *= -1.0;
        }
    }
}

SpectralEmbedding spectral_embedding(const WeightedGraph& g, int k_max) {
    const auto n = static_cast<int>(g.size());
    if (k_max < 1 || k_max > n) {
        throw ConfigError("embedding dimension " + std::to_string(k_max) + " must lie in [1, " +
                          std::to_string(n) + "]");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_laplacian(g));
    if (solver.info() != Eigen::Success) {
        throw NumericError("symmetric eigensolver did not converge on the normalized Laplacian (n = " +
                           std::to_string(n) + ", status " + std::to_string(solver.info()) + ")");
    }
    SpectralEmbedding emb;
    emb.vectors = solver.eigenvectors().leftCols(k_max);
    emb.eigenvalues = solver.eigenvalues().head(k_max);
    apply_sign_convention(emb.vectors);
    return emb;
}

Eigen::MatrixXd row_normalize(const Eigen::Ref<const Eigen::MatrixXd>& x) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const double norm = out.row(r).norm();
        if (norm > 0.0) {
            out.row(r) /= norm;
        }
    }
    return out;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double squared_distance(const double* a, const double* b, Eigen::Index dim) {
    double s = 0.0;
    for (Eigen::Index t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

/// Nearest centroid with ties to the lowest index; returns the squared distance.
double nearest(const RowMatrix& pts, Eigen::Index i, const RowMatrix& centroids, int& label) {
    const Eigen::Index dim = pts.cols();
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(pts.row(i).data(), centroids.row(c).data(), dim);
        if (d < best) {
            best = d;
            arg = static_cast<int>(c);
        }
    }
    label = arg;
    return best;
}

RowMatrix seed_plus_plus(const RowMatrix& pts, int k, rng::Engine& engine) {
    const Eigen::Index n = pts.rows();
    RowMatrix centroids(k, pts.cols());
    std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    auto first = static_cast<Eigen::Index>(rng::uniform_index(engine, static_cast<std::size_t>(n)));
    centroids.row(0) = pts.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = squared_distance(pts.row(i).data(), centroids.row(c - 1).data(), pts.cols());
            auto& slot = d2[static_cast<std::size_t>(i)];
            slot = std::min(slot, d);
            total += slot;
        }
        Eigen::Index pick = n - 1;
        if (total > 0.0) {
            const double target = rng::uniform01(engine) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[static_cast<std::size_t>(i)];
                if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng::uniform_index(engine, static_cast<std::size_t>(n)));
        }
        centroids.row(c) = pts.row(pick);
    }
    return centroids;
}

/// Means of each cluster; empty clusters are left untouched and reported.
std::vector<int> update_centroids(const RowMatrix& pts, const std::vector<int>& labels, RowMatrix& centroids) {
    const Eigen::Index k = centroids.rows();
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    RowMatrix sums = RowMatrix::Zero(k, pts.cols());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        sums.row(l) += pts.row(i);
        ++counts[static_cast<std::size_t>(l)];
    }
    std::vector<int> empty;
    for (Eigen::Index c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            empty.push_back(static_cast<int>(c));
        } else {
            centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
    }
    return empty;
}

/// Moves, for each empty cluster, the point farthest from its centroid
/// (among clusters that can spare one) into that cluster and recentres it
/// on that point.
void repair_empty(const RowMatrix& pts, std::vector<int>& labels, RowMatrix& centroids,
                  const std::vector<int>& empty) {
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
    for (int l : labels) {
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int c : empty) {
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            const int l = labels[static_cast<std::size_t>(i)];
            if (counts[static_cast<std::size_t>(l)] < 2) {
                continue;
            }
            const double d = squared_distance(pts.row(i).data(), centroids.row(l).data(), pts.cols());
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far < 0) {
            continue;  // unreachable while k <= n
        }
        --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = c;
        ++counts[static_cast<std::size_t>(c)];
        centroids.row(c) = pts.row(far);
    }
}

double wcss(const RowMatrix& pts, const std::vector<int>& labels, const RowMatrix& centroids) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        total += squared_distance(pts.row(i).data(), centroids.row(labels[static_cast<std::size_t>(i)]).data(),
                                  pts.cols());
    }
    return total;
}

struct Run {
    std::vector<int> labels;
    RowMatrix centroids;
    double objective;
};

Run lloyd(const RowMatrix& pts, int k, rng::Engine& engine, const KMeansOptions& opt) {
    const Eigen::Index n = pts.rows();
    RowMatrix centroids = seed_plus_plus(pts, k, engine);
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        bool changed = false;
        double objective = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int l = 0;
            objective += nearest(pts, i, centroids, l);
            auto& slot = labels[static_cast<std::size_t>(i)];
            changed = changed || slot != l;
            slot = l;
        }
        const auto empty = update_centroids(pts, labels, centroids);
        if (!empty.empty()) {
            repair_empty(pts, labels, centroids, empty);
            update_centroids(pts, labels, centroids);
            changed = true;
        }
        if (!changed || objective == 0.0 ||
            (std::isfinite(previous) && previous - objective <= opt.tolerance * previous)) {
            break;
        }
        previous = objective;
    }
    const double objective = wcss(pts, labels, centroids);
    return {std::move(labels), std::move(centroids), objective};
}

} // namespace

KMeansResult kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n) {
        throw ConfigError("k-means needs 1 <= K <= n (K = " + std::to_string(k) + ", n = " +
                          std::to_string(n) + ")");
    }
    if (options.restarts < 1 || options.max_iterations < 1 || !(options.tolerance >= 0.0)) {
        throw ConfigError("k-means needs restarts >= 1, iterations >= 1, tolerance >= 0");
    }
    const RowMatrix pts = points;
    auto engine = rng::make_engine(seed);
    std::optional<Run> best;
    for (int r = 0; r < options.restarts; ++r) {
        Run run = lloyd(pts, k, engine, options);
        if (!best || run.objective < best->objective) {
            best = std::move(run);
        }
    }
    return {ClusterAssignment(std::move(best->labels), k), Eigen::MatrixXd(best->centroids), best->objective};
}

double kmeans_objective(const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterAssignment& z) {
    if (static_cast<std::size_t>(points.rows()) != z.size()) {
        throw DimensionError("point count does not match assignment size");
    }
    const RowMatrix pts = points;
    RowMatrix centroids(z.k(), pts.cols());
    update_centroids(pts, z.labels(), centroids);
    return wcss(pts, z.labels(), centroids);
}

ClusterAssignment lloyd_step(const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterAssignment& z) {
    if (static_cast<std::size_t>(points.rows()) != z.size()) {
        throw DimensionError("point count does not match assignment size");
    }
    const RowMatrix pts = points;
    RowMatrix centroids(z.k(), pts.cols());
    update_centroids(pts, z.labels(), centroids);
    std::vector<int> labels(z.size());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        nearest(pts, i, centroids, labels[static_cast<std::size_t>(i)]);
    }
    return ClusterAssignment::from_raw_labels(labels);
}

ClusterResult cluster_with_k(const DistanceMatrix& d, const SpectralEmbedding& emb, int k,
                             std::uint64_t seed, const KMeansOptions& options) {
    if (k < 2 || k > emb.k_max()) {
        throw ConfigError("K = " + std::to_string(k) + " outside [2, " + std::to_string(emb.k_max()) + "]");
    }
    const Eigen::MatrixXd features = row_normalize(emb.vectors.leftCols(k));
    auto result = kmeans(features, k, rng::derive(seed, static_cast<std::uint64_t>(k)), options);
    const double score = silhouette(d, result.assignment).global;
    return {std::move(result.assignment), score};
}

ClusterResult cluster_with_k(const WeightedGraph& g, const SpectralEmbedding& emb, int k,
                             std::uint64_t seed, const KMeansOptions& options) {
    return cluster_with_k(distance_from_adjacency(g), emb, k, seed, options);
}

KSelectionResult select_k(const WeightedGraph& g, std::uint64_t seed, const SelectOptions& options) {
    if (options.k_min < 2 || options.k_max < options.k_min) {
        throw ConfigError("candidate range {" + std::to_string(options.k_min) + ".." +
                          std::to_string(options.k_max) + "} must satisfy 2 <= k_min <= k_max");
    }
    const auto emb = spectral_embedding(g, options.k_max);
    const auto dist = distance_from_adjacency(g);

    const auto count = static_cast<std::size_t>(options.k_max - options.k_min + 1);
    std::vector<std::optional<ClusterResult>> results(count);
    parallel_for(count, options.jobs, [&](std::size_t idx) {
        results[idx] = cluster_with_k(dist, emb, options.k_min + static_cast<int>(idx), seed, options.kmeans);
    });

    KSelectionResult out{0, results.front()->assignment, {}, {}};
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < count; ++idx) {
        const int k = options.k_min + static_cast<int>(idx);
        auto& r = *results[idx];
        out.curve.emplace(k, r.silhouette);
        if (r.silhouette > best) {
            best = r.silhouette;
            out.best_k = k;
            out.assignment = r.assignment;
        }
        if (options.keep_all_assignments) {
            out.per_k.emplace(k, std::move(r.assignment));
        }
    }
    return out;
}

} // namespace silnet
