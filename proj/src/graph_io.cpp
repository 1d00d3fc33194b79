#include "gnnl/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace gnnl {

using nlohmann::json;

namespace {

Vec read_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
  Vec out;
  out.reserve(j.size());
  for (const auto& c : j) {
    if (!c.is_number()) throw ParseError(what + " must contain only numbers");
    out.push_back(c.get<double>());
  }
  return out;
}

}  // namespace

Graph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("graph file needs a \"nodes\" array");
  }
  const json& nodes = doc["nodes"];
  const json edges = doc.value("edges", json::array());
  if (!edges.is_array()) throw ParseError("\"edges\" must be an array");

  std::vector<Vec> features;
  Graph::Layers layers;
  std::map<std::string, NodeId> index;
  std::vector<Point3> positions;
  std::size_t with_pos = 0;
  for (const auto& node : nodes) {
    if (!node.is_object() || !node.contains("id") || !node["id"].is_string()) {
      throw ParseError("every node needs a string \"id\"");
    }
    const auto id = node["id"].get<std::string>();
    if (!index.emplace(id, features.size()).second) throw ParseError("duplicate node id " + id);
    layers.names.push_back(id);
    features.push_back(read_vector(node.value("features", json::array()), "features of " + id));
    if (node.contains("pos")) {
      Vec p = read_vector(node["pos"], "pos of " + id);
      if (p.size() != 3) throw ParseError("pos of " + id + " must have 3 coordinates");
      positions.push_back({p[0], p[1], p[2]});
      ++with_pos;
    }
  }
  if (with_pos != 0 && with_pos != features.size()) {
    throw ParseError("positions must be given for every node or for none");
  }
  if (with_pos != 0) layers.positions = std::move(positions);

  auto lookup = [&](const json& e, const char* key) {
    if (!e.contains(key) || !e[key].is_string()) {
      throw ParseError(std::string("every edge needs a string \"") + key + "\"");
    }
    const auto id = e[key].get<std::string>();
    auto it = index.find(id);
    if (it == index.end()) throw ParseError("edge references unknown node " + id);
    return it->second;
  };

  std::vector<Edge> edge_list;
  std::vector<std::pair<int, int>> raw_ports;
  std::vector<Vec> edge_feats;
  std::size_t with_ports = 0;
  std::size_t with_feats = 0;
  for (const auto& e : edges) {
    if (!e.is_object()) throw ParseError("edges must be objects");
    const NodeId u = lookup(e, "u");
    const NodeId v = lookup(e, "v");
    edge_list.push_back({u, v});
    if (e.contains("ports")) {
      const auto& p = e["ports"];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        throw ParseError("edge ports must be a pair of integers");
      }
      raw_ports.push_back({p[0].get<int>(), p[1].get<int>()});
      ++with_ports;
    } else {
      raw_ports.push_back({0, 0});
    }
    if (e.contains("features")) {
      edge_feats.push_back(read_vector(e["features"], "edge features"));
      ++with_feats;
    } else {
      edge_feats.emplace_back();
    }
  }
  if (with_ports != 0 && with_ports != edge_list.size()) {
    throw ParseError("ports must be given for every edge or for none");
  }
  if (with_feats != 0 && with_feats != edge_list.size()) {
    throw ParseError("edge features must be given for every edge or for none");
  }
  if (with_feats != 0) layers.edge_features = std::move(edge_feats);
  if (doc.contains("feature_bound")) layers.feature_bound = doc["feature_bound"].get<double>();

  Graph g;
  try {
    g = Graph(std::move(features), edge_list, std::move(layers));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  if (with_ports == 0) return g;

  // Build the table directly so every defect is reported by (node, port).
  const std::size_t n = g.node_count();
  std::vector<std::vector<PortRef>> table(n);
  for (NodeId v = 0; v < n; ++v) table[v].assign(g.degree(v), PortRef{n, 0});
  for (std::size_t k = 0; k < edge_list.size(); ++k) {
    const auto [u, v] = edge_list[k];
    const auto [pu, pv] = raw_ports[k];
    auto place = [&](NodeId at, int port, NodeId other, int other_port) {
      if (port < 1 || static_cast<std::size_t>(port) > g.degree(at)) {
        throw PortError("inconsistent ports at (" + g.name(at) + ", " + std::to_string(port) +
                        "): port out of range 1.." + std::to_string(g.degree(at)));
      }
      auto& slot = table[at][static_cast<std::size_t>(port) - 1];
      if (slot.node != n) {
        throw PortError("inconsistent ports at (" + g.name(at) + ", " + std::to_string(port) +
                        "): port used by two edges");
      }
      slot = {other, other_port};
    };
    place(u, pu, v, pv);
    place(v, pv, u, pu);
  }
  Graph ported = g.with_ports(PortNumbering(std::move(table)));
  require_consistent_ports(ported);
  return ported;
}

std::string serialize_graph(const Graph& g) {
  json doc;
  doc["nodes"] = json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    json node;
    node["id"] = g.name(v);
    node["features"] = g.features(v);
    if (g.has_positions()) {
      const auto& p = g.position(v);
      node["pos"] = {p[0], p[1], p[2]};
    }
    doc["nodes"].push_back(std::move(node));
  }
  if (g.has_ports()) require_consistent_ports(g);
  doc["edges"] = json::array();
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    json edge;
    edge["u"] = g.name(e.u);
    edge["v"] = g.name(e.v);
    if (g.has_ports()) {
      const auto& row = g.ports().ports_of(e.u);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].node == e.v) {
          edge["ports"] = {static_cast<int>(i) + 1, row[i].port};
          break;
        }
      }
    }
    if (g.has_edge_features()) edge["features"] = (*g.edge_features())[k];
    doc["edges"].push_back(std::move(edge));
  }
  if (g.feature_bound()) doc["feature_bound"] = *g.feature_bound();
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

Graph load_graph(const std::filesystem::path& path) { return parse_graph(read_file(path)); }

void save_graph(const Graph& g, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_graph(g));
}

std::string to_dot(const Graph& g, const std::string& title) {
  std::ostringstream out;
  out << "graph \"" << title << "\" {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  n" << v << " [label=\"" << g.name(v) << "\"];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  n" << e.u << " -- n" << e.v;
    if (g.has_ports()) {
      int pu = 0;
      int pv = 0;
      const auto& row = g.ports().ports_of(e.u);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].node == e.v) {
          pu = static_cast<int>(i) + 1;
          pv = row[i].port;
        }
      }
      out << " [taillabel=\"" << pu << "\", headlabel=\"" << pv << "\"]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gnnl
