#pragma once

#include <filesystem>
#include <string>

#include "gnnl/graph.hpp"

namespace gnnl {

// Graph files are JSON documents:
//   { "nodes": [ {"id": "A1", "features": [..], "pos": [x, y, z]}, ... ],
//     "edges": [ {"u": "A1", "v": "B1", "ports": [pu, pv], "features": [..]}, ... ],
//     "feature_bound": 1.0 }
// "pos", "ports", edge "features" and "feature_bound" are optional layers; a
// layer is either present on every node/edge or on none.

Graph parse_graph(const std::string& text);
std::string serialize_graph(const Graph& g);

Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

/// Graphviz rendering; port numbers label the edge ends.
std::string to_dot(const Graph& g, const std::string& title = "G");

/// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace gnnl
