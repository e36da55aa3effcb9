#pragma once

#include "silnet/graph.hpp"
#include "silnet/spectral.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace silnet {

/// `k,silhouette` rows in ascending K.
std::string curve_csv(const std::map<int, double>& curve);

/// `node,cluster` rows in node order.
std::string assignment_csv(const WeightedGraph& g, const ClusterAssignment& z);

struct RingsConfig {
    std::vector<std::size_t> counts{200, 200, 200};
    std::vector<double> radii{1.0, 2.0, 3.0};
    std::uint64_t seed = 7;
};

struct RingsReport {
    int best_k = 0;
    double ari = 0.0;
    std::map<int, double> curve;
};

/// Concentric rings -> distance-based adjacency -> K sweep. Writes
/// rings_points.csv (x,y,ring,cluster), rings_curve.csv and
/// rings_summary.json into out_dir.
RingsReport run_rings(const std::filesystem::path& out_dir, const RingsConfig& config,
                      const SelectOptions& options = {});

} // namespace silnet
