#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gnnl {

using NodeId = std::size_t;
using Vec = std::vector<double>;
using Point3 = std::array<double, 3>;

/// Largest graph accepted by the exact (exponential) oracles.
inline constexpr std::size_t kMaxExactNodes = 64;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PortError : public Error {
 public:
  using Error::Error;
};

class MissingLayerError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnknownNameError : public Error {
 public:
  using Error::Error;
};

/// Endpoint of a port: node plus 1-based port index at that node.
struct PortRef {
  NodeId node = 0;
  int port = 0;

  friend bool operator==(const PortRef&, const PortRef&) = default;
  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

/// Raw port table p(v, i) -> (u, j). May be inconsistent; see validate_ports.
class PortNumbering {
 public:
  PortNumbering() = default;
  explicit PortNumbering(std::vector<std::vector<PortRef>> table) : table_(std::move(table)) {}

  std::size_t node_count() const { return table_.size(); }
  std::size_t degree(NodeId v) const { return table_.at(v).size(); }

  /// p(v, i) with 1-based i; nullopt when i is not a port of v.
  std::optional<PortRef> at(NodeId v, int port) const;

  const std::vector<PortRef>& ports_of(NodeId v) const { return table_.at(v); }
  const std::vector<std::vector<PortRef>>& table() const { return table_; }

  friend bool operator==(const PortNumbering&, const PortNumbering&) = default;

 private:
  std::vector<std::vector<PortRef>> table_;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph with optional layers (positions, edge
/// features, ports). Edges are stored normalized (u < v) and sorted.
class Graph {
 public:
  struct Layers {
    std::vector<std::string> names;
    std::optional<std::vector<Point3>> positions;
    std::optional<std::vector<Vec>> edge_features;  // parallel to input edges
    std::optional<PortNumbering> ports;
    std::optional<double> feature_bound;
  };

  Graph() = default;

  /// Throws Error on self-loops, duplicate edges, out-of-range endpoints,
  /// ragged features, or a violated feature bound.
  Graph(std::vector<Vec> features, std::vector<Edge> edges, Layers layers = {});

  std::size_t node_count() const { return features_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t feature_dim() const { return features_.empty() ? 0 : features_.front().size(); }

  const Vec& features(NodeId v) const { return features_.at(v); }
  const std::vector<Vec>& all_features() const { return features_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbors in ascending node order.
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  std::size_t max_degree() const;
  bool has_edge(NodeId u, NodeId v) const;
  /// Index into edges() of {u, v}; throws if absent.
  std::size_t edge_index(NodeId u, NodeId v) const;

  const std::string& name(NodeId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(const std::string& name) const;

  bool has_positions() const { return positions_.has_value(); }
  const Point3& position(NodeId v) const;
  const std::optional<std::vector<Point3>>& positions() const { return positions_; }

  bool has_edge_features() const { return edge_features_.has_value(); }
  /// Per-edge features, parallel to edges().
  const std::optional<std::vector<Vec>>& edge_features() const { return edge_features_; }

  bool has_ports() const { return ports_.has_value(); }
  const PortNumbering& ports() const;
  const std::optional<double>& feature_bound() const { return feature_bound_; }

  Graph with_ports(PortNumbering ports) const;
  Graph without_ports() const;
  Graph with_positions(std::vector<Point3> positions) const;
  Graph without_positions() const;
  Graph with_features(std::vector<Vec> features) const;

  /// Node v of the result is node perm[v] of this graph; all layers follow.
  Graph permuted(const std::vector<NodeId>& perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Vec> features_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::string> names_;
  std::optional<std::vector<Point3>> positions_;
  std::optional<std::vector<Vec>> edge_features_;
  std::optional<PortNumbering> ports_;
  std::optional<double> feature_bound_;
};

/// Disjoint union; node names of b get `suffix_b` appended when they collide.
Graph disjoint_union(const Graph& a, const Graph& b);

struct PortViolation {
  NodeId node = 0;
  int port = 0;
  std::string message;
};

/// Empty iff g's numbering is a consistent port numbering of g.
/// Throws MissingLayerError when g carries no numbering.
std::vector<PortViolation> validate_ports(const Graph& g);

/// Throws PortError naming the first offending (node, port).
void require_consistent_ports(const Graph& g);

/// Seed-deterministic consistent numbering: each node's incident edges get a
/// shuffled order; both endpoints of an edge read their own index.
PortNumbering generate_consistent_ports(const Graph& g, std::uint64_t seed);

/// Numbering where each node numbers its neighbors in ascending node order.
PortNumbering ascending_ports(const Graph& g);

/// Builds a table from per-edge (local, remote) assignments, parallel to edges().
PortNumbering ports_from_edges(const Graph& g, const std::vector<std::pair<int, int>>& edge_ports);

}  // namespace gnnl
