#pragma once

#include "silnet/graph.hpp"

#include <nlohmann/json_fwd.hpp>

#include <span>

namespace silnet {

/// Per-node cohesion a_i, separation b_i and silhouette width s_i, plus
/// their mean s_G. For nodes in singleton clusters a_i is NaN and s_i is 0.
struct SilhouetteReport {
    Eigen::VectorXd per_node;
    Eigen::VectorXd per_node_a;
    Eigen::VectorXd per_node_b;
    double global = 0.0;
};

/// Silhouette widths of partition `z` under dissimilarities `d`.
///
///   a_i = mean distance from i to the other members of its cluster
///   b_i = min over other clusters of the mean distance from i to it
///   s_i = (b_i - a_i) / max(a_i, b_i)
///
/// s_i is 0 for singleton clusters and when a_i = b_i = 0. s_G averages s_i
/// over every node, singletons included. Sums are compensated, so the
/// result does not depend on evaluation order beyond ~1e-15 relative.
///
/// Throws DegenerateInputError if z has fewer than two clusters and
/// DimensionError if d and z disagree on n.
SilhouetteReport silhouette(const DistanceMatrix& d, const ClusterAssignment& z);

/// Hubert-Arabie adjusted Rand index of two labelings of the same nodes.
/// Labels may be arbitrary integers. When the chance-corrected denominator
/// vanishes (both partitions all singletons, or both a single cluster) the
/// result is 1 if the partitions coincide up to relabelling and 0
/// otherwise. Throws DimensionError on length mismatch.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);
double adjusted_rand_index(const ClusterAssignment& a, const ClusterAssignment& b);

/// {"global": s_G, "per_node": [...], "a": [...], "b": [...]}; undefined
/// a_i values are emitted as null.
nlohmann::json to_json(const SilhouetteReport& report);

} // namespace silnet
