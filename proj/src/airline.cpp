#include "silnet/airline.hpp"

#include "silnet/edgelist.hpp"
#include "silnet/error.hpp"
#include "silnet/harness.hpp"
#include "silnet/workflows.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace silnet::airline {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::optional<double> parse_optional_double(std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

int find_column(const std::vector<std::string>& header, std::initializer_list<const char*> names) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        for (const char* name : names) {
            if (lower(header[c]) == name) {
                return static_cast<int>(c);
            }
        }
    }
    return -1;
}

} // namespace

DirectedWeightedNetwork read_arcs(std::istream& in, const std::string& source,
                                  const std::vector<std::string>& extra_ids) {
    struct Row {
        std::string a, b;
        double w;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::set<std::string> ids(extra_ids.begin(), extra_ids.end());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        Row row{{}, {}, 0.0, lineno};
        std::string weight_text, extra;
        if (!(fields >> row.a >> row.b >> weight_text) || (fields >> extra)) {
            throw ParseError(source, lineno, "expected `src dst weight`");
        }
        auto w = parse_optional_double(weight_text);
        if (!w || !std::isfinite(*w)) {
            throw ParseError(source, lineno, "weight '" + weight_text + "' is not a number");
        }
        if (row.a == row.b) {
            throw ParseError(source, lineno, "self-arc on node '" + row.a + "'");
        }
        row.w = *w;
        ids.insert(row.a);
        ids.insert(row.b);
        rows.push_back(std::move(row));
    }

    DirectedWeightedNetwork net;
    net.node_ids.assign(ids.begin(), ids.end());
    sort_node_ids(net.node_ids);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < net.node_ids.size(); ++i) {
        index.emplace(net.node_ids[i], i);
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    net.arcs.reserve(rows.size());
    for (const auto& r : rows) {
        const auto s = index.at(r.a);
        const auto d = index.at(r.b);
        auto [it, fresh] = seen.try_emplace({s, d}, r.line);
        if (!fresh) {
            throw ParseError(source, r.line,
                             "duplicate arc " + r.a + " -> " + r.b + " (first on line " + std::to_string(it->second) + ")");
        }
        net.arcs.push_back({s, d, r.w});
    }
    return net;
}

std::vector<CityMetadata> read_city_metadata(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty() && line[0] != '#') {
            header = split_csv_line(line);
        }
    }
    const int c_id = find_column(header, {"id", "city_id", "node"});
    const int c_name = find_column(header, {"name", "city"});
    const int c_lat = find_column(header, {"lat", "latitude"});
    const int c_lon = find_column(header, {"lon", "lng", "longitude"});
    const int c_pop = find_column(header, {"population", "metro_pop", "pop"});
    if (c_id < 0) {
        throw ParseError(source, lineno, "metadata header has no 'id' column");
    }

    std::vector<CityMetadata> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < header.size()) {
            throw ParseError(source, lineno,
                             "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        }
        auto field = [&](int c) { return c >= 0 ? f[static_cast<std::size_t>(c)] : std::string(); };
        CityMetadata m;
        m.id = field(c_id);
        m.name = field(c_name);
        m.latitude = parse_optional_double(field(c_lat));
        m.longitude = parse_optional_double(field(c_lon));
        m.population = parse_optional_double(field(c_pop));
        if (m.latitude && (*m.latitude < -90.0 || *m.latitude > 90.0)) {
            throw ParseError(source, lineno, "latitude out of range");
        }
        if (m.longitude && (*m.longitude < -180.0 || *m.longitude > 180.0)) {
            throw ParseError(source, lineno, "longitude out of range");
        }
        if (m.population && *m.population < 0.0) {
            throw ParseError(source, lineno, "negative population");
        }
        out.push_back(std::move(m));
    }
    return out;
}

LoadedNetwork load_airline(const std::filesystem::path& edges, const std::filesystem::path& meta) {
    std::ifstream meta_in(meta);
    if (!meta_in) {
        throw IoError("cannot open city metadata '" + meta.string() + "'");
    }
    auto cities = read_city_metadata(meta_in, meta.string());

    std::ifstream edge_in(edges);
    if (!edge_in) {
        throw IoError("cannot open arc list '" + edges.string() + "'");
    }
    std::vector<std::string> meta_ids;
    for (const auto& c : cities) {
        meta_ids.push_back(c.id);
    }
    LoadedNetwork out;
    out.network = read_arcs(edge_in, edges.string(), meta_ids);

    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < cities.size(); ++i) {
        by_id.emplace(cities[i].id, i);
    }
    std::size_t missing = 0;
    out.cities.reserve(out.network.node_ids.size());
    for (const auto& id : out.network.node_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            ++missing;
            out.cities.emplace_back(std::nullopt);
        } else {
            out.cities.emplace_back(cities[it->second]);
        }
    }
    if (missing > 0) {
        out.warnings.push_back(std::to_string(missing) + " node(s) have no metadata row; kept without coordinates");
    }
    if (out.network.node_ids.size() != kExpectedCities) {
        out.warnings.push_back("network has " + std::to_string(out.network.node_ids.size()) + " nodes, expected " +
                               std::to_string(kExpectedCities));
    }
    return out;
}

Preprocessed preprocess(const DirectedWeightedNetwork& net) {
    if (net.arcs.size() < 2) {
        throw DegenerateInputError("need at least two arcs to rescale weights");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : net.arcs) {
        lo = std::min(lo, a.weight);
        hi = std::max(hi, a.weight);
    }
    const double range = hi - lo;
    if (!(range > 0.0)) {
        throw DegenerateInputError("all arc weights are equal; min-max rescale is undefined");
    }

    std::map<std::pair<std::size_t, std::size_t>, double> scaled;
    for (const auto& a : net.arcs) {
        scaled[{a.src, a.dst}] = (a.weight - lo) / range;
    }

    const auto n = static_cast<Eigen::Index>(net.node_ids.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    Preprocessed out{WeightedGraph(Eigen::MatrixXd::Zero(0, 0)), 0, 0, 0, 0};
    for (const auto& [key, forward] : scaled) {
        const auto [i, j] = key;
        auto back = scaled.find({j, i});
        if (back == scaled.end()) {
            ++out.one_way_pairs;
            continue;
        }
        if (i > j) {
            continue;  // counted from the (j, i) side
        }
        ++out.mutual_pairs;
        const double mean = std::clamp(0.5 * (forward + back->second), 0.0, 1.0);
        if (forward == 0.0 || back->second == 0.0) {
            ++out.boundary_pairs;
        }
        if (mean == 0.0) {
            ++out.zero_weight_pairs;
        }
        w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mean;
        w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mean;
    }
    out.graph = WeightedGraph(std::move(w), net.node_ids);
    return out;
}

BlockDensityTable block_densities(const WeightedGraph& g, const ClusterAssignment& z) {
    if (g.size() != z.size()) {
        throw DimensionError("graph and assignment sizes differ");
    }
    const auto k = static_cast<Eigen::Index>(z.k());
    Eigen::MatrixXd edges = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            if (g.weight(i, j) != 0.0) {
                const auto a = std::min(z[i], z[j]);
                const auto b = std::max(z[i], z[j]);
                edges(a, b) += 1.0;
            }
        }
    }
    BlockDensityTable t;
    t.sizes = z.cluster_sizes();
    t.percent = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a; b < k; ++b) {
            const auto na = static_cast<double>(t.sizes[static_cast<std::size_t>(a)]);
            const auto nb = static_cast<double>(t.sizes[static_cast<std::size_t>(b)]);
            const double possible = a == b ? na * (na - 1.0) / 2.0 : na * nb;
            t.percent(a, b) = possible > 0.0 ? 100.0 * edges(a, b) / possible : 0.0;
        }
    }
    return t;
}

Analysis analyze(const WeightedGraph& g, std::uint64_t seed, const SelectOptions& options) {
    auto selection = select_k(g, seed, options);
    auto clusters = selection.assignment.sorted_by_size();
    auto density = block_densities(g, clusters);
    return {std::move(selection), std::move(clusters), std::move(density)};
}

std::string to_geojson(const WeightedGraph& g, const ClusterAssignment& z,
                       const std::vector<std::optional<CityMetadata>>& cities, std::size_t* omitted) {
    const Eigen::VectorXd strength = g.strengths();
    auto features = nlohmann::json::array();
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& c = i < cities.size() ? cities[i] : std::nullopt;
        if (!c || !c->latitude || !c->longitude) {
            ++skipped;
            continue;
        }
        nlohmann::json props = {{"id", c->id},
                                {"name", c->name},
                                {"cluster", z[i]},
                                {"strength", strength(static_cast<Eigen::Index>(i))},
                                {"population", nullptr}};
        if (c->population) {
            props["population"] = *c->population;
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {*c->longitude, *c->latitude}}}},
                            {"properties", std::move(props)}});
    }
    if (omitted) {
        *omitted = skipped;
    }
    return nlohmann::json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump(1) + "\n";
}

std::string clusters_csv(const WeightedGraph& g, const ClusterAssignment& z,
                         const std::vector<std::optional<CityMetadata>>& cities) {
    const Eigen::VectorXd strength = g.strengths();
    std::ostringstream out;
    out << "city_id,name,cluster,strength\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& c = i < cities.size() ? cities[i] : std::nullopt;
        out << csv_escape(g.node_label(i)) << ',' << csv_escape(c ? c->name : std::string()) << ',' << z[i] << ','
            << format_double(strength(static_cast<Eigen::Index>(i))) << '\n';
    }
    return out.str();
}

std::string density_csv(const BlockDensityTable& t) {
    const auto k = t.sizes.size();
    std::ostringstream out;
    out << "cluster,size";
    for (std::size_t b = 0; b < k; ++b) {
        out << ",c" << b;
    }
    out << '\n';
    char buf[32];
    for (std::size_t a = 0; a < k; ++a) {
        out << a << ',' << t.sizes[a];
        for (std::size_t b = 0; b < k; ++b) {
            out << ',';
            if (b >= a) {
                std::snprintf(buf, sizeof buf, "%.2f",
                              t.percent(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
                out << buf;
            }
        }
        out << '\n';
    }
    return out.str();
}

CaseStudyReport run_case_study(const std::filesystem::path& edges, const std::filesystem::path& meta,
                               const std::filesystem::path& out_dir, std::uint64_t seed,
                               const SelectOptions& options) {
    auto loaded = load_airline(edges, meta);
    std::filesystem::create_directories(out_dir);
    auto pre = preprocess(loaded.network);
    auto analysis = analyze(pre.graph, seed, options);

    CaseStudyReport report;
    report.nodes = pre.graph.size();
    report.edges = pre.graph.edge_count();
    report.best_k = analysis.selection.best_k;
    report.cluster_sizes = analysis.density.sizes;
    for (Eigen::Index c = 0; c < analysis.density.percent.rows(); ++c) {
        report.diagonal_density.push_back(analysis.density.percent(c, c));
    }
    report.warnings = loaded.warnings;
    if (pre.zero_weight_pairs > 0) {
        report.warnings.push_back(std::to_string(pre.zero_weight_pairs) +
                                  " mutual pair(s) average to weight 0 and carry no edge");
    }

    std::size_t omitted = 0;
    write_file_atomically(out_dir / "airline_clusters.csv", clusters_csv(pre.graph, analysis.clusters, loaded.cities));
    write_file_atomically(out_dir / "airline_density.csv", density_csv(analysis.density));
    write_file_atomically(out_dir / "airline_map.geojson",
                          to_geojson(pre.graph, analysis.clusters, loaded.cities, &omitted));
    write_file_atomically(out_dir / "airline_curve.csv", curve_csv(analysis.selection.curve));
    if (omitted > 0) {
        report.warnings.push_back(std::to_string(omitted) + " city(ies) without coordinates omitted from the map");
    }

    const double possible = static_cast<double>(report.nodes) * static_cast<double>(report.nodes - 1) / 2.0;
    nlohmann::json summary = {{"nodes", report.nodes},
                              {"edges", report.edges},
                              {"mutual_pairs", pre.mutual_pairs},
                              {"one_way_pairs_dropped", pre.one_way_pairs},
                              {"zero_weight_pairs", pre.zero_weight_pairs},
                              {"boundary_pairs", pre.boundary_pairs},
                              {"sparsity", possible > 0 ? 1.0 - static_cast<double>(report.edges) / possible : 0.0},
                              {"seed", seed},
                              {"k_min", options.k_min},
                              {"k_max", options.k_max},
                              {"best_k", report.best_k},
                              {"cluster_sizes", report.cluster_sizes},
                              {"diagonal_density_percent", report.diagonal_density},
                              {"warnings", report.warnings}};
    write_file_atomically(out_dir / "airline_summary.json", summary.dump(2) + "\n");
    return report;
}

} // namespace silnet::airline
