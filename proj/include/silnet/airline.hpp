#pragma once

#include "silnet/graph.hpp"
#include "silnet/spectral.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace silnet::airline {

/// Number of cities in the reachability network.
inline constexpr std::size_t kExpectedCities = 456;
/// Pinned seed for the case-study K sweep.
inline constexpr std::uint64_t kDefaultSeed = 20160923;

struct Arc {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 0.0;  // negative travel time
};

/// Directed network over node_ids; no self-arcs, at most one arc per
/// ordered pair.
struct DirectedWeightedNetwork {
    std::vector<std::string> node_ids;
    std::vector<Arc> arcs;
};

struct CityMetadata {
    std::string id;
    std::string name;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::optional<double> population;
};

/// Whitespace-separated `src dst weight` arcs; '#' comments skipped.
/// Duplicate and self arcs are ParseErrors carrying the line number.
/// Nodes are the arc endpoints plus `extra_ids`, ordered like edge lists.
DirectedWeightedNetwork read_arcs(std::istream& in, const std::string& source,
                                  const std::vector<std::string>& extra_ids = {});

/// CSV with a header row; columns are located by name: id, name,
/// lat|latitude, lon|lng|longitude, population|metro_pop. Fields may be
/// double-quoted.
std::vector<CityMetadata> read_city_metadata(std::istream& in, const std::string& source);

struct LoadedNetwork {
    DirectedWeightedNetwork network;
    /// Aligned with network.node_ids; nullopt where no metadata row exists.
    std::vector<std::optional<CityMetadata>> cities;
    std::vector<std::string> warnings;
};

/// Reads both files. A node-count different from kExpectedCities and nodes
/// without metadata are reported as warnings, not errors.
LoadedNetwork load_airline(const std::filesystem::path& edges, const std::filesystem::path& meta);

struct Preprocessed {
    WeightedGraph graph;
    std::size_t mutual_pairs = 0;       // pairs with arcs in both directions
    std::size_t one_way_pairs = 0;      // dropped
    std::size_t zero_weight_pairs = 0;  // mutual pairs whose mean rescaled weight is 0
    std::size_t boundary_pairs = 0;     // mutual pairs with one direction rescaled to 0
};

/// Min-max rescales every arc weight to [0,1], then gives each mutually
/// connected pair the mean of its two rescaled weights. One-way pairs are
/// dropped. Throws DegenerateInputError when all arc weights are equal.
Preprocessed preprocess(const DirectedWeightedNetwork& net);

/// Percent of possible pairs carrying an edge, within (diagonal, over
/// C(n_k, 2) pairs) and between (over n_k * n_l pairs) clusters. Only the
/// upper triangle is filled.
struct BlockDensityTable {
    std::vector<std::size_t> sizes;
    Eigen::MatrixXd percent;
};

BlockDensityTable block_densities(const WeightedGraph& g, const ClusterAssignment& z);

struct Analysis {
    KSelectionResult selection;
    /// selection.assignment relabelled so cluster 0 is the largest.
    ClusterAssignment clusters;
    BlockDensityTable density;
};

Analysis analyze(const WeightedGraph& g, std::uint64_t seed, const SelectOptions& options = {});

/// GeoJSON FeatureCollection of Point features with properties cluster,
/// strength, name and population. Cities without coordinates are skipped
/// and counted in `omitted`.
std::string to_geojson(const WeightedGraph& g, const ClusterAssignment& z,
                       const std::vector<std::optional<CityMetadata>>& cities, std::size_t* omitted = nullptr);

std::string clusters_csv(const WeightedGraph& g, const ClusterAssignment& z,
                         const std::vector<std::optional<CityMetadata>>& cities);
std::string density_csv(const BlockDensityTable& t);

struct CaseStudyReport {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    int best_k = 0;
    std::vector<std::size_t> cluster_sizes;
    std::vector<double> diagonal_density;
    std::vector<std::string> warnings;
};

/// load -> preprocess -> analyze -> write airline_clusters.csv,
/// airline_density.csv, airline_map.geojson, airline_curve.csv and
/// airline_summary.json into out_dir.
CaseStudyReport run_case_study(const std::filesystem::path& edges, const std::filesystem::path& meta,
                               const std::filesystem::path& out_dir, std::uint64_t seed,
                               const SelectOptions& options = {});

} // namespace silnet::airline
