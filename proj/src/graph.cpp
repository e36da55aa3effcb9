#include "silnet/graph.hpp"

#include "silnet/error.hpp"
#include "silnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace silnet {

std::optional<std::string> weight_matrix_violation(const Eigen::MatrixXd& w) {
    if (w.rows() != w.cols()) {
        return "matrix is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols());
    }
    const Eigen::Index n = w.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (w(i, i) != 0.0) {
            return "nonzero diagonal at node " + std::to_string(i);
        }
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = w(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                return "weight (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                       std::to_string(v) + " outside [0,1]";
            }
            if (v != w(j, i)) {
                return "asymmetric weight at (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        }
    }
    return std::nullopt;
}

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights, std::vector<std::string> node_ids)
    : weights_(std::move(weights)), node_ids_(std::move(node_ids)) {
    if (auto why = weight_matrix_violation(weights_)) {
        throw ConfigError("invalid adjacency: " + *why);
    }
    if (!node_ids_.empty() && node_ids_.size() != size()) {
        throw ConfigError("node id count " + std::to_string(node_ids_.size()) +
                          " does not match node count " + std::to_string(size()));
    }
}

std::string WeightedGraph::node_label(std::size_t i) const {
    return node_ids_.empty() ? std::to_string(i) : node_ids_.at(i);
}

std::size_t WeightedGraph::edge_count() const {
    std::size_t m = 0;
    const Eigen::Index n = weights_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            m += weights_(i, j) != 0.0 ? 1 : 0;
        }
    }
    return m;
}

Eigen::VectorXd WeightedGraph::strengths() const { return weights_.rowwise().sum(); }

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd dist) : dist_(std::move(dist)) {
    if (dist_.rows() != dist_.cols()) {
        throw ConfigError("distance matrix is not square");
    }
    const Eigen::Index n = dist_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dist_(i, i) != 0.0) {
            throw ConfigError("distance matrix has nonzero diagonal at " + std::to_string(i));
        }
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = dist_(i, j);
            if (!std::isfinite(v) || v < 0.0 || v != dist_(j, i)) {
                throw ConfigError("invalid distance at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
            }
        }
    }
}

ClusterAssignment::ClusterAssignment(std::vector<int> labels, int k)
    : labels_(std::move(labels)), k_(k) {
    if (k_ < 1 && !labels_.empty()) {
        throw ConfigError("cluster count must be positive");
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(k_, 0)), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const int l = labels_[i];
        if (l < 0 || l >= k_) {
            throw ConfigError("label " + std::to_string(l) + " of node " + std::to_string(i) +
                              " outside [0," + std::to_string(k_) + ")");
        }
        ++counts[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw ConfigError("cluster " + std::to_string(c) + " is empty");
        }
    }
}

ClusterAssignment ClusterAssignment::from_raw_labels(std::span<const int> raw) {
    std::unordered_map<int, int> remap;
    std::vector<int> labels;
    labels.reserve(raw.size());
    for (int r : raw) {
        auto [it, inserted] = remap.try_emplace(r, static_cast<int>(remap.size()));
        labels.push_back(it->second);
    }
    return ClusterAssignment(std::move(labels), static_cast<int>(remap.size()));
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
    for (int l : labels_) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    return sizes;
}

ClusterAssignment ClusterAssignment::sorted_by_size() const {
    const auto sizes = cluster_sizes();
    std::vector<std::size_t> first_member(sizes.size(), labels_.size());
    for (std::size_t i = labels_.size(); i-- > 0;) {
        first_member[static_cast<std::size_t>(labels_[i])] = i;
    }
    std::vector<int> order(sizes.size());
    for (std::size_t c = 0; c < order.size(); ++c) {
        order[c] = static_cast<int>(c);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (sizes[ua] != sizes[ub]) {
            return sizes[ua] > sizes[ub];
        }
        return first_member[ua] < first_member[ub];
    });
    std::vector<int> new_label(sizes.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        new_label[static_cast<std::size_t>(order[rank])] = static_cast<int>(rank);
    }
    std::vector<int> relabelled(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        relabelled[i] = new_label[static_cast<std::size_t>(labels_[i])];
    }
    return ClusterAssignment(std::move(relabelled), k_);
}

DistanceMatrix distance_from_adjacency(const WeightedGraph& g) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(g.weights().rows(), g.weights().cols()) - g.weights();
    d.diagonal().setZero();
    return DistanceMatrix(std::move(d));
}

PointCloud generate_rings(std::span<const std::size_t> counts, std::span<const double> radii,
                          std::uint64_t seed) {
    if (counts.size() != radii.size() || counts.empty()) {
        throw ConfigError("ring counts and radii must be non-empty and of equal length");
    }
    std::size_t total = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r] == 0 || !(radii[r] >= 0.0) || !std::isfinite(radii[r])) {
            throw ConfigError("ring " + std::to_string(r) + " needs a positive count and radius >= 0");
        }
        total += counts[r];
    }

    PointCloud pc;
    pc.points.resize(static_cast<Eigen::Index>(total), 2);
    pc.labels.reserve(total);
    auto engine = rng::make_engine(seed);
    Eigen::Index row = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        for (std::size_t p = 0; p < counts[r]; ++p, ++row) {
            const double theta = 2.0 * std::numbers::pi * rng::uniform01(engine);
            pc.points(row, 0) = radii[r] * std::cos(theta);
            pc.points(row, 1) = radii[r] * std::sin(theta);
            pc.labels.push_back(static_cast<int>(r));
        }
    }
    return pc;
}

WeightedGraph adjacency_from_points(const PointCloud& pc) {
    const Eigen::Index n = pc.points.rows();
    if (n < 2) {
        throw DegenerateInputError("need at least two points to build an adjacency");
    }
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (pc.points.row(i) - pc.points.row(j)).norm();
            dist(i, j) = d;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    const double range = hi - lo;
    if (!(range > 0.0)) {
        throw DegenerateInputError("all pairwise distances are equal; min-max rescale is undefined");
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double scaled = std::clamp((dist(i, j) - lo) / range, 0.0, 1.0);
            w(i, j) = w(j, i) = 1.0 - scaled;
        }
    }
    return WeightedGraph(std::move(w));
}

} // namespace silnet
