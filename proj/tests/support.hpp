#pragma once

// Random graph generators and brute-force reference implementations. The
// references share no code with the library: plain adjacency matrices,
// exhaustive enumeration and textbook dynamic programs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "gnnl/graph.hpp"

namespace testing_support {

using gnnl::Edge;
using gnnl::Graph;
using gnnl::NodeId;

inline constexpr std::int64_t kInf = -1;

inline std::vector<std::vector<bool>> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) {
    a[e.u][e.v] = true;
    a[e.v][e.u] = true;
  }
  return a;
}

/// G(n, p) with one-hot-ish random features; optional positions and ports.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng, std::size_t dim = 4,
                          bool positions = false, bool ports = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  std::vector<gnnl::Vec> features(n, gnnl::Vec(dim, 0.0));
  for (auto& x : features) x[pick(rng)] = 1.0;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.push_back({u, v});
    }
  }
  Graph::Layers layers;
  if (positions) {
    std::vector<gnnl::Point3> pos(n);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (auto& q : pos) q = {coord(rng), coord(rng), coord(rng)};
    layers.positions = pos;
  }
  Graph g(std::move(features), std::move(edges), layers);
  if (ports) g = g.with_ports(gnnl::generate_consistent_ports(g, rng()));
  return g;
}

/// All-pairs hop distances by Floyd-Warshall; max() marks unreachable pairs.
inline std::vector<std::vector<std::int64_t>> hop_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::int64_t big = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, big));
  const auto a = adjacency_matrix(g);
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  for (auto& row : d) {
    for (auto& x : row) {
      if (x >= big) x = std::numeric_limits<std::int64_t>::max();
    }
  }
  return d;
}

/// Eccentricity extremes; kInf when disconnected.
inline std::pair<std::int64_t, std::int64_t> diameter_radius(const Graph& g) {
  const auto d = hop_distances(g);
  const std::size_t n = g.node_count();
  if (n == 0) return {0, 0};
  std::int64_t diam = 0;
  std::int64_t rad = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t ecc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] == std::numeric_limits<std::int64_t>::max()) return {kInf, kInf};
      ecc = std::max(ecc, d[i][j]);
    }
    diam = std::max(diam, ecc);
    rad = std::min(rad, ecc);
  }
  return {diam, rad};
}

/// Simple cycles as edge-index bitmasks, by testing every edge subset for
/// being connected and 2-regular. Needs at most ~22 edges.
inline std::vector<std::uint64_t> cycle_edge_sets(const Graph& g) {
  const auto& edges = g.edges();
  const std::size_t m = edges.size();
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
    if (std::popcount(s) < 3) continue;
    std::vector<int> deg(n, 0);
    for (std::size_t k = 0; k < m; ++k) {
      if (s >> k & 1) {
        ++deg[edges[k].u];
        ++deg[edges[k].v];
      }
    }
    bool regular = true;
    std::size_t start = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (deg[v] != 0 && deg[v] != 2) regular = false;
      if (deg[v] == 2 && start == n) start = v;
    }
    if (!regular) continue;
    // Connected iff a walk along the subset from `start` covers every edge.
    std::uint64_t seen = 0;
    std::vector<NodeId> stack{start};
    std::vector<bool> visited(n, false);
    visited[start] = true;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (std::size_t k = 0; k < m; ++k) {
        if (!(s >> k & 1)) continue;
        if (edges[k].u != v && edges[k].v != v) continue;
        seen |= std::uint64_t{1} << k;
        const NodeId w = edges[k].u == v ? edges[k].v : edges[k].u;
        if (!visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (seen == s) out.push_back(s);
  }
  return out;
}

inline std::uint64_t vertex_set(const Graph& g, std::uint64_t edge_set) {
  std::uint64_t vs = 0;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (edge_set >> k & 1) {
      vs |= std::uint64_t{1} << g.edges()[k].u;
      vs |= std::uint64_t{1} << g.edges()[k].v;
    }
  }
  return vs;
}

/// Two cycles whose intersection is one edge and its two endpoints.
inline bool conjoint_oracle(const Graph& g) {
  const auto cycles = cycle_edge_sets(g);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      const std::uint64_t shared = cycles[i] & cycles[j];
      if (std::popcount(shared) != 1) continue;
      if (std::popcount(vertex_set(g, cycles[i]) & vertex_set(g, cycles[j])) == 2) return true;
    }
  }
  return false;
}

/// Shortest cycle: for each edge, shortest alternative path between its ends.
inline std::int64_t girth_oracle(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  std::int64_t best = kInf;
  for (const auto& e : g.edges()) {
    std::vector<std::int64_t> dist(n, -1);
    std::vector<NodeId> queue{e.u};
    dist[e.u] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const NodeId v = queue[h];
      for (NodeId w = 0; w < n; ++w) {
        if (!a[v][w] || dist[w] >= 0) continue;
        if ((v == e.u && w == e.v) || (v == e.v && w == e.u)) continue;
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
    if (dist[e.v] >= 0 && (best == kInf || dist[e.v] + 1 < best)) best = dist[e.v] + 1;
  }
  return best;
}

/// Longest cycle by Held-Karp over paths anchored at their smallest vertex.
inline std::int64_t circumference_oracle(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  std::int64_t best = kInf;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::vector<bool>> reach(std::size_t{1} << n, std::vector<bool>(n, false));
    reach[std::size_t{1} << s][s] = true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      if (!(mask >> s & 1) || (mask & ((std::size_t{1} << s) - 1))) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (!reach[mask][v]) continue;
        const auto len = std::popcount(mask);
        if (len >= 3 && a[v][s]) best = std::max<std::int64_t>(best, len);
        for (std::size_t w = s + 1; w < n; ++w) {
          if (a[v][w] && !(mask >> w & 1)) reach[mask | (std::size_t{1} << w)][w] = true;
        }
      }
    }
  }
  return best;
}

inline std::int64_t clique_oracle(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  std::int64_t best = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if ((s >> i & 1) && (s >> j & 1) && !a[i][j]) ok = false;
      }
    }
    if (ok) best = std::max<std::int64_t>(best, std::popcount(s));
  }
  return best;
}

/// Number of length-L walks starting at each node: (A + 0)^L 1.
inline std::vector<std::uint64_t> walk_counts(const Graph& g, std::size_t length) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  std::vector<std::uint64_t> w(n, 1);
  for (std::size_t step = 0; step < length; ++step) {
    std::vector<std::uint64_t> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (a[i][j]) next[i] += w[j];
      }
    }
    w = std::move(next);
  }
  return w;
}

}  // namespace testing_support
