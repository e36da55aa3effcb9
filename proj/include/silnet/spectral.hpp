#pragma once

#include "silnet/graph.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace silnet {

/// L = S^-1/2 (S - W) S^-1/2 with S = diag(row sums of W). A node with zero
/// strength gets a zero row and column except L_ii = 1.
Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g);

/// The k_max eigenpairs of the normalized Laplacian with smallest
/// eigenvalues, ascending. Each eigenvector is signed so that its
/// largest-magnitude entry (first one on ties) is positive.
struct SpectralEmbedding {
    Eigen::MatrixXd vectors;      // n x k_max
    Eigen::VectorXd eigenvalues;  // k_max, ascending

    int k_max() const noexcept { return static_cast<int>(vectors.cols()); }
};

/// Throws ConfigError unless 1 <= k_max <= n, NumericError if the
/// eigensolver fails.
SpectralEmbedding spectral_embedding(const WeightedGraph& g, int k_max);

/// Flips each column so its largest-magnitude entry is positive.
void apply_sign_convention(Eigen::MatrixXd& vectors);

/// Divides each row by its Euclidean norm; all-zero rows stay zero.
Eigen::MatrixXd row_normalize(const Eigen::Ref<const Eigen::MatrixXd>& x);

struct KMeansOptions {
    int restarts = 25;
    int max_iterations = 300;
    /// Stop once the within-cluster sum of squares drops by less than this
    /// fraction between iterations (or the labels stop changing).
    double tolerance = 1e-8;
};

struct KMeansResult {
    ClusterAssignment assignment;
    Eigen::MatrixXd centroids;  // k x d, means of the returned clusters
    double objective = 0.0;     // within-cluster sum of squares
};

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` runs.
/// Points are rows. Empty clusters are reseeded at the point farthest from
/// its centroid, so every returned cluster is non-empty. Throws
/// ConfigError if k > n or k < 1.
KMeansResult kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Within-cluster sum of squared distances to the cluster means.
double kmeans_objective(const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterAssignment& z);

/// One Lloyd iteration (recompute means, reassign to nearest) applied to z.
/// Exposed for fixed-point checks.
ClusterAssignment lloyd_step(const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterAssignment& z);

struct ClusterResult {
    ClusterAssignment assignment;
    double silhouette = 0.0;
};

/// Clusters the first k embedding columns (row-normalised) with k-means
/// seeded from derive(seed, k), then scores the partition with the
/// silhouette under d = 1 - w.
ClusterResult cluster_with_k(const WeightedGraph& g, const SpectralEmbedding& emb, int k,
                             std::uint64_t seed, const KMeansOptions& options = {});
ClusterResult cluster_with_k(const DistanceMatrix& d, const SpectralEmbedding& emb, int k,
                             std::uint64_t seed, const KMeansOptions& options = {});

struct SelectOptions {
    int k_min = 2;
    int k_max = 20;
    KMeansOptions kmeans;
    /// Threads for the K sweep; results do not depend on it.
    unsigned jobs = 1;
    bool keep_all_assignments = false;
};

struct KSelectionResult {
    int best_k = 0;
    ClusterAssignment assignment;
    std::map<int, double> curve;
    /// Filled only with SelectOptions::keep_all_assignments.
    std::map<int, ClusterAssignment> per_k;
};

/// Embeds once at k_max and keeps the K in [k_min, k_max] with the largest
/// global silhouette; exact ties go to the smaller K.
KSelectionResult select_k(const WeightedGraph& g, std::uint64_t seed, const SelectOptions& options = {});

} // namespace silnet
