#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace silnet {

/// Returns a description of the first violated invariant of a weight matrix
/// (square, finite, zero diagonal, exactly symmetric, entries in [0,1]), or
/// nullopt when the matrix is a valid adjacency.
std::optional<std::string> weight_matrix_violation(const Eigen::MatrixXd& w);

/// Undirected graph with similarity weights in [0,1], stored densely.
/// A zero weight means "no edge". Immutable once constructed.
class WeightedGraph {
public:
    /// Throws ConfigError if `weights` violates any adjacency invariant or if
    /// `node_ids` is non-empty with the wrong length.
    explicit WeightedGraph(Eigen::MatrixXd weights, std::vector<std::string> node_ids = {});

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }
    double weight(std::size_t i, std::size_t j) const {
        return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Labels for I/O; empty when the graph was built from a bare matrix.
    const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
    std::string node_label(std::size_t i) const;

    /// Number of unordered pairs with nonzero weight.
    std::size_t edge_count() const;

    /// Row sums of the weight matrix.
    Eigen::VectorXd strengths() const;

private:
    Eigen::MatrixXd weights_;
    std::vector<std::string> node_ids_;
};

/// Symmetric dissimilarities with zero diagonal.
class DistanceMatrix {
public:
    /// Throws ConfigError unless square, finite, symmetric with zero diagonal
    /// and non-negative.
    explicit DistanceMatrix(Eigen::MatrixXd dist);

    std::size_t size() const noexcept { return static_cast<std::size_t>(dist_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return dist_; }
    double operator()(std::size_t i, std::size_t j) const {
        return dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Eigen::MatrixXd dist_;
};

/// Hard partition of n nodes into K non-empty clusters labelled 0..K-1.
class ClusterAssignment {
public:
    /// Throws ConfigError if a label is outside [0,k) or a cluster is empty.
    ClusterAssignment(std::vector<int> labels, int k);

    /// Relabels arbitrary integer labels to 0..K-1 in order of first
    /// appearance.
    static ClusterAssignment from_raw_labels(std::span<const int> raw);

    std::size_t size() const noexcept { return labels_.size(); }
    int k() const noexcept { return k_; }
    int operator[](std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    std::vector<std::size_t> cluster_sizes() const;

    /// Same partition, relabelled so cluster 0 is the largest; equal sizes
    /// are ordered by their smallest member index.
    ClusterAssignment sorted_by_size() const;

    bool operator==(const ClusterAssignment&) const = default;

private:
    std::vector<int> labels_;
    int k_;
};

/// Points in the plane with a ground-truth group per point.
struct PointCloud {
    Eigen::Matrix<double, Eigen::Dynamic, 2> points;
    std::vector<int> labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
};

/// d_ij = 1 - w_ij off the diagonal, 0 on it.
DistanceMatrix distance_from_adjacency(const WeightedGraph& g);

/// Concentric rings: counts[r] points at exactly radius radii[r], angles
/// uniform on [0, 2pi). Labels hold the ring index.
PointCloud generate_rings(std::span<const std::size_t> counts, std::span<const double> radii,
                          std::uint64_t seed);

/// Euclidean distances min-max rescaled over all i<j pairs, weight =
/// 1 - rescaled distance. Throws DegenerateInputError when every pairwise
/// distance is equal (including the two-point case).
WeightedGraph adjacency_from_points(const PointCloud& pc);

} // namespace silnet
