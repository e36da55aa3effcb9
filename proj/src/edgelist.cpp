#include "silnet/edgelist.hpp"

#include "silnet/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace silnet {
namespace {

bool parse_integer(const std::string& s, long long& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

} // namespace

void sort_node_ids(std::vector<std::string>& ids) {
    std::vector<long long> numeric(ids.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < ids.size() && all_numeric; ++i) {
        all_numeric = parse_integer(ids[i], numeric[i]);
    }
    if (!all_numeric) {
        std::sort(ids.begin(), ids.end());
        return;
    }
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(numeric[a], ids[a]) < std::tie(numeric[b], ids[b]);
    });
    std::vector<std::string> sorted;
    sorted.reserve(ids.size());
    for (std::size_t i : order) {
        sorted.push_back(std::move(ids[i]));
    }
    ids = std::move(sorted);
}

WeightedGraph read_edge_list(std::istream& in, const std::string& source_name) {
    struct Row {
        std::string a, b;
        double w;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        Row row{{}, {}, 0.0, lineno};
        std::string weight_text, extra;
        if (!(fields >> row.a >> row.b >> weight_text) || (fields >> extra)) {
            throw ParseError(source_name, lineno, "expected `src<TAB>dst<TAB>weight`");
        }
        if (!parse_double(weight_text, row.w) || !(row.w >= 0.0 && row.w <= 1.0)) {
            throw ParseError(source_name, lineno, "weight '" + weight_text + "' is not in [0,1]");
        }
        if (row.a == row.b) {
            throw ParseError(source_name, lineno, "self-loop on node '" + row.a + "'");
        }
        seen_ids.insert(row.a);
        seen_ids.insert(row.b);
        rows.push_back(std::move(row));
    }
    if (in.bad()) {
        throw IoError("read failure on " + source_name);
    }

    std::vector<std::string> ids(seen_ids.begin(), seen_ids.end());
    sort_node_ids(ids);
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index.emplace(ids[i], static_cast<Eigen::Index>(i));
    }

    const auto n = static_cast<Eigen::Index>(ids.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    std::map<std::pair<Eigen::Index, Eigen::Index>, std::size_t> first_line;
    for (const Row& row : rows) {
        auto i = index.at(row.a);
        auto j = index.at(row.b);
        if (i > j) {
            std::swap(i, j);
        }
        auto [it, inserted] = first_line.try_emplace({i, j}, row.line);
        if (!inserted) {
            throw ParseError(source_name, row.line,
                             "duplicate edge " + row.a + " -- " + row.b + " (first seen on line " +
                                 std::to_string(it->second) + ")");
        }
        w(i, j) = w(j, i) = row.w;
    }
    return WeightedGraph(std::move(w), std::move(ids));
}

WeightedGraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open edge list '" + path.string() + "'");
    }
    return read_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    std::vector<std::tuple<std::string, std::string, double>> edges;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = g.weight(i, j);
            if (w == 0.0) {
                continue;
            }
            auto a = g.node_label(i);
            auto b = g.node_label(j);
            if (b < a) {
                std::swap(a, b);
            }
            edges.emplace_back(std::move(a), std::move(b), w);
        }
    }
    std::sort(edges.begin(), edges.end());
    out << "# src\tdst\tweight\n";
    for (const auto& [a, b, w] : edges) {
        out << a << '\t' << b << '\t' << format_weight(w) << '\n';
    }
}

void write_edge_list(const std::filesystem::path& path, const WeightedGraph& g) {
    std::ostringstream buf;
    write_edge_list(buf, g);
    write_file_atomically(path, buf.str());
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + tmp.string() + "'");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw IoError("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

} // namespace silnet
