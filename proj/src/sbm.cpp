#include "silnet/sbm.hpp"

#include "silnet/error.hpp"
#include "silnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace silnet {
namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void check_sizes(std::span<const std::size_t> sizes, int k) {
    if (sizes.empty() || static_cast<int>(sizes.size()) != k) {
        throw ConfigError("expected " + std::to_string(k) + " block sizes, got " +
                          std::to_string(sizes.size()));
    }
    for (std::size_t s : sizes) {
        if (s == 0) {
            throw ConfigError("block sizes must be positive");
        }
    }
}

} // namespace

BlockProbMatrix::BlockProbMatrix(Eigen::MatrixXd probs) : probs_(std::move(probs)) {
    if (probs_.rows() != probs_.cols() || probs_.rows() == 0) {
        throw ConfigError("block probability matrix must be square and non-empty");
    }
    for (Eigen::Index a = 0; a < probs_.rows(); ++a) {
        for (Eigen::Index b = 0; b < probs_.cols(); ++b) {
            if (!is_probability(probs_(a, b))) {
                throw ConfigError("link probability " + std::to_string(probs_(a, b)) +
                                  " outside [0,1]");
            }
            if (probs_(a, b) != probs_(b, a)) {
                throw ConfigError("block probability matrix is not symmetric");
            }
        }
    }
}

WeightDistribution WeightDistribution::uniform(double lo, double hi) {
    if (!is_probability(lo) || !is_probability(hi) || lo > hi) {
        throw ConfigError("weight distribution Unif(" + std::to_string(lo) + "," +
                          std::to_string(hi) + ") must satisfy 0 <= lo <= hi <= 1");
    }
    return {lo, hi};
}

SizeProfile SizeProfile::imbalanced(double dominant_fraction) {
    if (!(dominant_fraction > 0.0 && dominant_fraction < 1.0)) {
        throw ConfigError("dominant fraction must lie in (0,1)");
    }
    return {ProfileKind::Imbalanced, dominant_fraction};
}

SizeProfile SizeProfile::imbalanced_default(int k) {
    switch (k) {
    case 3: return imbalanced(0.80);
    case 8: return imbalanced(0.65);
    default:
        throw ConfigError("no default NE profile for K = " + std::to_string(k) +
                          "; give the dominant fraction explicitly");
    }
}

std::vector<std::size_t> allocate_sizes(std::size_t n, int k, const SizeProfile& profile) {
    if (k < 2 || n < static_cast<std::size_t>(k)) {
        throw ConfigError("need n >= K >= 2 (n = " + std::to_string(n) + ", K = " +
                          std::to_string(k) + ")");
    }
    const auto kk = static_cast<std::size_t>(k);
    std::vector<double> quota(kk);
    if (profile.kind == ProfileKind::Equal) {
        std::fill(quota.begin(), quota.end(), static_cast<double>(n) / k);
    } else {
        quota[0] = profile.dominant_fraction * static_cast<double>(n);
        const double rest = (1.0 - profile.dominant_fraction) * static_cast<double>(n) / (k - 1);
        std::fill(quota.begin() + 1, quota.end(), rest);
    }

    // Largest remainder. The epsilon absorbs representation error such as
    // 0.1 * 240 = 24.000000000000004 or 0.8 * 240 landing just below 192.
    constexpr double eps = 1e-9;
    std::vector<std::size_t> sizes(kk);
    std::vector<double> remainder(kk);
    std::size_t assigned = 0;
    for (std::size_t b = 0; b < kk; ++b) {
        const double fl = std::floor(quota[b] + eps);
        sizes[b] = static_cast<std::size_t>(fl);
        remainder[b] = quota[b] - fl;
        assigned += sizes[b];
    }
    std::vector<std::size_t> order(kk);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) {
        ++sizes[order[r % kk]];
    }

    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    if (sizes.back() == 0) {
        throw ConfigError("size profile leaves an empty block at n = " + std::to_string(n));
    }
    return sizes;
}

BlockProbMatrix build_prob_matrix(int k, double p_win, double p_btw, std::optional<WeakPair> weak_pair) {
    if (k < 1) {
        throw ConfigError("K must be positive");
    }
    if (!is_probability(p_win) || !is_probability(p_btw)) {
        throw ConfigError("p_win and p_btw must lie in [0,1]");
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(k, k, p_btw);
    p.diagonal().setConstant(p_win);
    if (weak_pair) {
        const auto& wp = *weak_pair;
        if (wp.a == wp.b || wp.a < 0 || wp.b < 0 || wp.a >= k || wp.b >= k) {
            throw ConfigError("weak pair blocks must be distinct and below K");
        }
        if (!is_probability(wp.p)) {
            throw ConfigError("weak pair probability outside [0,1]");
        }
        p(wp.a, wp.b) = p(wp.b, wp.a) = wp.p;
    }
    return BlockProbMatrix(std::move(p));
}

ClusterAssignment block_labels(std::span<const std::size_t> sizes) {
    std::vector<int> labels;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        labels.insert(labels.end(), sizes[b], static_cast<int>(b));
    }
    return ClusterAssignment(std::move(labels), static_cast<int>(sizes.size()));
}

SampledGraph sample_weighted(std::span<const std::size_t> sizes, const BlockProbMatrix& probs,
                             const WeightDistribution& w_win, const WeightDistribution& w_btw,
                             std::uint64_t seed) {
    check_sizes(sizes, probs.k());
    auto truth = block_labels(sizes);
    const auto n = static_cast<Eigen::Index>(truth.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    auto engine = rng::make_engine(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int bi = truth[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const int bj = truth[static_cast<std::size_t>(j)];
            if (rng::uniform01(engine) < probs(bi, bj)) {
                const auto& dist = bi == bj ? w_win : w_btw;
                w(i, j) = w(j, i) = rng::uniform(engine, dist.lo, dist.hi);
            }
        }
    }
    return {WeightedGraph(std::move(w)), std::move(truth)};
}

SampledGraph sample_unweighted(std::span<const std::size_t> sizes, const BlockProbMatrix& probs,
                               std::uint64_t seed) {
    const auto one = WeightDistribution::constant_one();
    return sample_weighted(sizes, probs, one, one, seed);
}

SampledGraph sample_fully_connected(std::span<const std::size_t> sizes,
                                    const WeightDistribution& w_win,
                                    const WeightDistribution& w_btw, std::uint64_t seed) {
    if (sizes.empty()) {
        throw ConfigError("block sizes must be non-empty");
    }
    check_sizes(sizes, static_cast<int>(sizes.size()));
    auto truth = block_labels(sizes);
    const auto n = static_cast<Eigen::Index>(truth.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    auto engine = rng::make_engine(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int bi = truth[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& dist = bi == truth[static_cast<std::size_t>(j)] ? w_win : w_btw;
            w(i, j) = w(j, i) = rng::uniform(engine, dist.lo, dist.hi);
        }
    }
    return {WeightedGraph(std::move(w)), std::move(truth)};
}

} // namespace silnet
