#include "gnnl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace gnnl {

std::optional<PortRef> PortNumbering::at(NodeId v, int port) const {
  if (v >= table_.size() || port < 1 || static_cast<std::size_t>(port) > table_[v].size()) {
    return std::nullopt;
  }
  return table_[v][static_cast<std::size_t>(port) - 1];
}

Graph::Graph(std::vector<Vec> features, std::vector<Edge> edges, Layers layers)
    : features_(std::move(features)) {
  const std::size_t n = features_.size();
  for (const auto& x : features_) {
    if (x.size() != features_.front().size()) {
      throw DimensionError("all node feature vectors must share one dimension");
    }
  }
  if (layers.edge_features && layers.edge_features->size() != edges.size()) {
    throw Error("edge feature list must be parallel to the edge list");
  }

  std::vector<std::pair<Edge, std::size_t>> normalized;
  normalized.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [u, v] = edges[k];
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loops are not supported (node " + std::to_string(u) + ")");
    if (u > v) std::swap(u, v);
    normalized.push_back({Edge{u, v}, k});
  }
  std::sort(normalized.begin(), normalized.end());
  for (std::size_t k = 1; k < normalized.size(); ++k) {
    if (normalized[k].first == normalized[k - 1].first) {
      throw Error("duplicate edge {" + std::to_string(normalized[k].first.u) + ", " +
                  std::to_string(normalized[k].first.v) + "}");
    }
  }

  adjacency_.assign(n, {});
  for (const auto& [e, k] : normalized) {
    edges_.push_back(e);
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  if (layers.edge_features) {
    std::vector<Vec> sorted;
    sorted.reserve(normalized.size());
    for (const auto& [e, k] : normalized) sorted.push_back((*layers.edge_features)[k]);
    edge_features_ = std::move(sorted);
  }

  if (layers.names.empty()) {
    names_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) names_.push_back("v" + std::to_string(v));
  } else {
    if (layers.names.size() != n) throw Error("node name list must have one entry per node");
    std::set<std::string> seen(layers.names.begin(), layers.names.end());
    if (seen.size() != n) throw Error("node names must be unique");
    names_ = std::move(layers.names);
  }

  if (layers.positions) {
    if (layers.positions->size() != n) throw Error("positions must be given for every node");
    positions_ = std::move(layers.positions);
  }
  if (layers.ports) {
    if (layers.ports->node_count() != n) throw PortError("port table must have one row per node");
    ports_ = std::move(layers.ports);
  }
  if (layers.feature_bound) {
    const double bound = *layers.feature_bound;
    for (std::size_t v = 0; v < n; ++v) {
      double sq = 0.0;
      for (double c : features_[v]) sq += c * c;
      if (std::sqrt(sq) > bound) {
        throw Error("feature vector of node " + names_[v] + " exceeds the declared bound");
      }
    }
    feature_bound_ = bound;
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nb : adjacency_) best = std::max(best, nb.size());
  return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::edge_index(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
  if (it == edges_.end() || *it != Edge{u, v}) throw Error("no such edge");
  return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<NodeId> Graph::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeId>(it - names_.begin());
}

const Point3& Graph::position(NodeId v) const {
  if (!positions_) throw MissingLayerError("graph has no node positions");
  return positions_->at(v);
}

const PortNumbering& Graph::ports() const {
  if (!ports_) throw MissingLayerError("graph has no port numbering");
  return *ports_;
}

namespace {

Graph::Layers layers_of(const Graph& g) {
  Graph::Layers layers;
  layers.names = g.names();
  layers.positions = g.positions();
  layers.edge_features = g.edge_features();
  if (g.has_ports()) layers.ports = g.ports();
  layers.feature_bound = g.feature_bound();
  return layers;
}

}  // namespace

Graph Graph::with_ports(PortNumbering ports) const {
  auto layers = layers_of(*this);
  layers.ports = std::move(ports);
  return Graph(features_, edges_, std::move(layers));
}

Graph Graph::without_ports() const {
  auto layers = layers_of(*this);
  layers.ports.reset();
  return Graph(features_, edges_, std::move(layers));
}

Graph Graph::with_positions(std::vector<Point3> positions) const {
  auto layers = layers_of(*this);
  layers.positions = std::move(positions);
  return Graph(features_, edges_, std::move(layers));
}

Graph Graph::without_positions() const {
  auto layers = layers_of(*this);
  layers.positions.reset();
  return Graph(features_, edges_, std::move(layers));
}

Graph Graph::with_features(std::vector<Vec> features) const {
  auto layers = layers_of(*this);
  layers.feature_bound.reset();
  return Graph(std::move(features), edges_, std::move(layers));
}

Graph Graph::permuted(const std::vector<NodeId>& perm) const {
  const std::size_t n = node_count();
  if (perm.size() != n) throw Error("permutation size mismatch");
  std::vector<NodeId> inverse(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    if (perm[v] >= n || inverse[perm[v]] != n) throw Error("not a permutation");
    inverse[perm[v]] = v;
  }

  std::vector<Vec> features(n);
  Layers layers;
  layers.names.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    features[v] = features_[perm[v]];
    layers.names[v] = names_[perm[v]];
  }
  if (positions_) {
    std::vector<Point3> pos(n);
    for (std::size_t v = 0; v < n; ++v) pos[v] = (*positions_)[perm[v]];
    layers.positions = std::move(pos);
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({inverse[e.u], inverse[e.v]});
  layers.edge_features = edge_features_;
  if (ports_) {
    std::vector<std::vector<PortRef>> table(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& ref : ports_->ports_of(perm[v])) {
        table[v].push_back({inverse[ref.node], ref.port});
      }
    }
    layers.ports = PortNumbering(std::move(table));
  }
  layers.feature_bound = feature_bound_;
  return Graph(std::move(features), std::move(edges), std::move(layers));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  const std::size_t na = a.node_count();
  if (a.node_count() > 0 && b.node_count() > 0 && a.feature_dim() != b.feature_dim()) {
    throw DimensionError("disjoint union of graphs with different feature dimensions");
  }
  std::vector<Vec> features = a.all_features();
  features.insert(features.end(), b.all_features().begin(), b.all_features().end());

  Graph::Layers layers;
  std::set<std::string> used(a.names().begin(), a.names().end());
  layers.names = a.names();
  for (const auto& nm : b.names()) {
    std::string candidate = nm;
    while (used.count(candidate)) candidate += "'";
    used.insert(candidate);
    layers.names.push_back(candidate);
  }

  std::vector<Edge> edges = a.edges();
  for (const auto& e : b.edges()) edges.push_back({e.u + na, e.v + na});

  if (a.has_edge_features() && b.has_edge_features()) {
    std::vector<Vec> ef = *a.edge_features();
    ef.insert(ef.end(), b.edge_features()->begin(), b.edge_features()->end());
    layers.edge_features = std::move(ef);
  }
  if (a.has_positions() && b.has_positions()) {
    std::vector<Point3> pos = *a.positions();
    pos.insert(pos.end(), b.positions()->begin(), b.positions()->end());
    layers.positions = std::move(pos);
  }
  if (a.has_ports() && b.has_ports()) {
    auto table = a.ports().table();
    for (const auto& row : b.ports().table()) {
      std::vector<PortRef> shifted;
      for (const auto& ref : row) shifted.push_back({ref.node + na, ref.port});
      table.push_back(std::move(shifted));
    }
    layers.ports = PortNumbering(std::move(table));
  }
  return Graph(std::move(features), std::move(edges), std::move(layers));
}

std::vector<PortViolation> validate_ports(const Graph& g) {
  const PortNumbering& p = g.ports();
  std::vector<PortViolation> out;
  const std::size_t n = g.node_count();
  if (p.node_count() != n) {
    out.push_back({0, 0, "port table has " + std::to_string(p.node_count()) + " rows for " +
                             std::to_string(n) + " nodes"});
    return out;
  }

  auto target_valid = [&](const PortRef& ref) {
    return ref.node < n && ref.port >= 1 && static_cast<std::size_t>(ref.port) <= p.degree(ref.node);
  };

  for (NodeId v = 0; v < n; ++v) {
    const auto& row = p.ports_of(v);
    if (row.size() != g.degree(v)) {
      out.push_back({v, 0, "node has " + std::to_string(row.size()) + " ports but degree " +
                               std::to_string(g.degree(v))});
    }
    std::set<NodeId> targets;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const int port = static_cast<int>(i) + 1;
      const PortRef& ref = row[i];
      if (ref.node >= n || !g.has_edge(v, ref.node)) {
        out.push_back({v, port, "port does not lead to a neighbor"});
        continue;
      }
      if (!targets.insert(ref.node).second) {
        out.push_back({v, port, "neighbor " + g.name(ref.node) + " reached by two ports"});
        continue;
      }
      if (!target_valid(ref)) {
        out.push_back({v, port, "remote node " + g.name(ref.node) + " has no port " +
                                    std::to_string(ref.port)});
        continue;
      }
      const PortRef back = p.ports_of(ref.node)[static_cast<std::size_t>(ref.port) - 1];
      // A broken back-pointer whose own target is invalid is reported at that target.
      if (back != PortRef{v, port} && target_valid(back)) {
        out.push_back({v, port, "p(p(v,i)) != (v,i): port leads to (" + g.name(ref.node) + "," +
                                    std::to_string(ref.port) + ") which points back to (" +
                                    g.name(back.node) + "," + std::to_string(back.port) + ")"});
      }
    }
  }
  return out;
}

void require_consistent_ports(const Graph& g) {
  if (!g.has_ports()) throw MissingLayerError("graph has no port numbering");
  auto violations = validate_ports(g);
  if (!violations.empty()) {
    const auto& first = violations.front();
    std::ostringstream msg;
    msg << "inconsistent port numbering at (" << g.name(first.node) << ", " << first.port
        << "): " << first.message;
    throw PortError(msg.str());
  }
}

PortNumbering ports_from_edges(const Graph& g, const std::vector<std::pair<int, int>>& edge_ports) {
  if (edge_ports.size() != g.edge_count()) throw PortError("one port pair per edge required");
  const std::size_t n = g.node_count();
  std::vector<std::vector<PortRef>> table(n);
  for (NodeId v = 0; v < n; ++v) table[v].assign(g.degree(v), PortRef{n, 0});
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    const auto [pu, pv] = edge_ports[k];
    if (pu < 1 || static_cast<std::size_t>(pu) > g.degree(e.u)) {
      throw PortError("port " + std::to_string(pu) + " out of range at node " + g.name(e.u));
    }
    if (pv < 1 || static_cast<std::size_t>(pv) > g.degree(e.v)) {
      throw PortError("port " + std::to_string(pv) + " out of range at node " + g.name(e.v));
    }
    auto& slot_u = table[e.u][static_cast<std::size_t>(pu) - 1];
    auto& slot_v = table[e.v][static_cast<std::size_t>(pv) - 1];
    if (slot_u.node != n) {
      throw PortError("port " + std::to_string(pu) + " used twice at node " + g.name(e.u));
    }
    if (slot_v.node != n) {
      throw PortError("port " + std::to_string(pv) + " used twice at node " + g.name(e.v));
    }
    slot_u = {e.v, pv};
    slot_v = {e.u, pu};
  }
  return PortNumbering(std::move(table));
}

PortNumbering ascending_ports(const Graph& g) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g.edge_count());
  auto local_index = [&](NodeId v, NodeId u) {
    const auto& nb = g.neighbors(v);
    return static_cast<int>(std::lower_bound(nb.begin(), nb.end(), u) - nb.begin()) + 1;
  };
  for (const auto& e : g.edges()) pairs.push_back({local_index(e.u, e.v), local_index(e.v, e.u)});
  return ports_from_edges(g, pairs);
}

PortNumbering generate_consistent_ports(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = g.node_count();
  // order[v][k] = position (0-based) assigned to the k-th ascending neighbor of v
  std::vector<std::vector<int>> order(n);
  for (NodeId v = 0; v < n; ++v) {
    std::vector<int> perm(g.degree(v));
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates on raw engine output keeps the result identical across standard libraries.
    for (std::size_t i = perm.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(perm[i - 1], perm[j]);
    }
    order[v] = std::move(perm);
  }
  auto local = [&](NodeId v, NodeId u) {
    const auto& nb = g.neighbors(v);
    const auto k = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), u) - nb.begin());
    return order[v][k] + 1;
  };
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g.edge_count());
  for (const auto& e : g.edges()) pairs.push_back({local(e.u, e.v), local(e.v, e.u)});
  return ports_from_edges(g, pairs);
}

}  // namespace gnnl
