#include "silnet/metrics.hpp"

#include "silnet/error.hpp"
#include "silnet/summation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace silnet {

SilhouetteReport silhouette(const DistanceMatrix& d, const ClusterAssignment& z) {
    if (d.size() != z.size()) {
        throw DimensionError("distance matrix has " + std::to_string(d.size()) +
                             " nodes but assignment has " + std::to_string(z.size()));
    }
    if (z.k() < 2) {
        throw DegenerateInputError("silhouette needs at least two clusters, got K = " +
                                   std::to_string(z.k()));
    }
    const std::size_t n = z.size();
    const auto k = static_cast<std::size_t>(z.k());
    const auto sizes = z.cluster_sizes();
    const Eigen::MatrixXd& dm = d.matrix();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SilhouetteReport report;
    report.per_node.resize(static_cast<Eigen::Index>(n));
    report.per_node_a.resize(static_cast<Eigen::Index>(n));
    report.per_node_b.resize(static_cast<Eigen::Index>(n));

    std::vector<CompensatedSum> to_cluster(k);
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(to_cluster.begin(), to_cluster.end(), CompensatedSum{});
        // Column access: the matrix is symmetric and column-major.
        const auto col = dm.col(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                to_cluster[static_cast<std::size_t>(z[j])] += col(static_cast<Eigen::Index>(j));
            }
        }
        const auto own = static_cast<std::size_t>(z[i]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own) {
                b = std::min(b, to_cluster[c].value() / static_cast<double>(sizes[c]));
            }
        }
        double a = nan;
        double s = 0.0;
        if (sizes[own] > 1) {
            a = to_cluster[own].value() / static_cast<double>(sizes[own] - 1);
            const double denom = std::max(a, b);
            s = denom > 0.0 ? (b - a) / denom : 0.0;
        }
        const auto ii = static_cast<Eigen::Index>(i);
        report.per_node(ii) = s;
        report.per_node_a(ii) = a;
        report.per_node_b(ii) = b;
        total += s;
    }
    report.global = total.value() / static_cast<double>(n);
    return report;
}

namespace {

std::int64_t pairs(std::int64_t m) { return m * (m - 1) / 2; }

bool same_partition(std::span<const int> a, std::span<const int> b) {
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [ia, fresh_a] = ab.try_emplace(a[i], b[i]);
        auto [ib, fresh_b] = ba.try_emplace(b[i], a[i]);
        if (ia->second != b[i] || ib->second != a[i]) {
            return false;
        }
    }
    return true;
}

} // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw DimensionError("ARI of labelings with " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " nodes");
    }
    std::map<std::pair<int, int>, std::int64_t> joint;
    std::map<int, std::int64_t> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    std::int64_t index = 0, sum_rows = 0, sum_cols = 0;
    for (const auto& [key, m] : joint) {
        index += pairs(m);
    }
    for (const auto& [key, m] : rows) {
        sum_rows += pairs(m);
    }
    for (const auto& [key, m] : cols) {
        sum_cols += pairs(m);
    }
    const auto total = pairs(static_cast<std::int64_t>(a.size()));

    // ARI = (Index - E)/(Max - E) with E = A*B/N and Max = (A+B)/2; scaling
    // numerator and denominator by 2N keeps both integral. That is exact up
    // to n of about 5e4; beyond that fall back to floating point.
    double numerator = 0.0;
    double denominator = 0.0;
    if (a.size() <= 50000) {
        numerator = static_cast<double>(2 * total * index - 2 * sum_rows * sum_cols);
        denominator = static_cast<double>(total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols);
    } else {
        const double nt = static_cast<double>(total);
        const double sr = static_cast<double>(sum_rows);
        const double sc = static_cast<double>(sum_cols);
        numerator = 2.0 * nt * static_cast<double>(index) - 2.0 * sr * sc;
        denominator = nt * (sr + sc) - 2.0 * sr * sc;
    }
    if (denominator == 0.0) {
        return same_partition(a, b) ? 1.0 : 0.0;
    }
    return numerator / denominator;
}

double adjusted_rand_index(const ClusterAssignment& a, const ClusterAssignment& b) {
    return adjusted_rand_index(std::span<const int>(a.labels()), std::span<const int>(b.labels()));
}

nlohmann::json to_json(const SilhouetteReport& report) {
    auto as_array = [](const Eigen::VectorXd& v) {
        auto arr = nlohmann::json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::isfinite(v(i))) {
                arr.push_back(v(i));
            } else {
                arr.push_back(nullptr);
            }
        }
        return arr;
    };
    return {{"global", report.global},
            {"per_node", as_array(report.per_node)},
            {"a", as_array(report.per_node_a)},
            {"b", as_array(report.per_node_b)}};
}

} // namespace silnet
