#pragma once

#include "silnet/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace silnet {

// Text edge lists: one undirected edge per line as `src<TAB>dst<TAB>weight`.
// Lines starting with '#' and blank lines are skipped. Node ids are opaque
// strings; nodes are indexed in numeric order when every id is an integer
// and in lexicographic order otherwise.

WeightedGraph read_edge_list(std::istream& in, const std::string& source_name = "<stream>");
WeightedGraph read_edge_list(const std::filesystem::path& path);

/// Writes each nonzero pair once with src < dst (lexicographically by id).
/// Weights are printed with enough digits to round-trip exactly.
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list(const std::filesystem::path& path, const WeightedGraph& g);

/// Orders ids numerically if all of them parse as integers, else
/// lexicographically. Shared by the airline loader.
void sort_node_ids(std::vector<std::string>& ids);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

} // namespace silnet
