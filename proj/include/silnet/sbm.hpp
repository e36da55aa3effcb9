#pragma once

#include "silnet/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace silnet {

/// Symmetric K x K matrix of link probabilities.
class BlockProbMatrix {
public:
    /// Throws ConfigError unless square, symmetric, entries in [0,1].
    explicit BlockProbMatrix(Eigen::MatrixXd probs);

    int k() const noexcept { return static_cast<int>(probs_.rows()); }
    double operator()(int a, int b) const { return probs_(a, b); }
    const Eigen::MatrixXd& matrix() const noexcept { return probs_; }

private:
    Eigen::MatrixXd probs_;
};

/// Uniform distribution on [lo, hi] within [0, 1].
struct WeightDistribution {
    double lo = 1.0;
    double hi = 1.0;

    static WeightDistribution uniform(double lo, double hi);
    static WeightDistribution constant_one() { return {1.0, 1.0}; }
    double mean() const noexcept { return 0.5 * (lo + hi); }
    bool operator==(const WeightDistribution&) const = default;
};

enum class ProfileKind { Equal, Imbalanced };

/// EQ: equal sizes. NE: one dominant block holding `dominant_fraction` of the
/// nodes, the remainder split evenly across the other K-1 blocks.
struct SizeProfile {
    ProfileKind kind = ProfileKind::Equal;
    double dominant_fraction = 0.0;

    static SizeProfile equal() { return {}; }
    static SizeProfile imbalanced(double dominant_fraction);
    /// 80/10/10 for K = 3 and 65/5x7 for K = 8; ConfigError for other K.
    static SizeProfile imbalanced_default(int k);
};

/// Block sizes summing to n, descending, rounded by largest remainder.
/// Throws ConfigError if n < K, K < 2 or any block would be empty.
std::vector<std::size_t> allocate_sizes(std::size_t n, int k, const SizeProfile& profile);

struct WeakPair {
    int a = 1;
    int b = 2;
    double p = 0.0;
};

/// p_win on the diagonal, p_btw elsewhere, and optionally one symmetric
/// off-diagonal pair overridden with a weaker separation.
BlockProbMatrix build_prob_matrix(int k, double p_win, double p_btw,
                                  std::optional<WeakPair> weak_pair = std::nullopt);

struct SampledGraph {
    WeightedGraph graph;
    ClusterAssignment truth;
};

// All samplers label nodes block-contiguously and walk the pairs (i, j),
// i < j, in row-major order from a single engine seeded with `seed`.
// Edge-presence samplers draw one uniform for presence and, if present, one
// for the weight.

SampledGraph sample_unweighted(std::span<const std::size_t> sizes, const BlockProbMatrix& probs,
                               std::uint64_t seed);

SampledGraph sample_weighted(std::span<const std::size_t> sizes, const BlockProbMatrix& probs,
                             const WeightDistribution& w_win, const WeightDistribution& w_btw,
                             std::uint64_t seed);

/// Every pair linked; one weight draw per pair.
SampledGraph sample_fully_connected(std::span<const std::size_t> sizes,
                                    const WeightDistribution& w_win,
                                    const WeightDistribution& w_btw, std::uint64_t seed);

/// Ground-truth labels for block-contiguous node numbering.
ClusterAssignment block_labels(std::span<const std::size_t> sizes);

} // namespace silnet
