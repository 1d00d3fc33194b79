#include "gnnl/properties.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace gnnl {

namespace {

void require_exact_size(const Graph& g) {
  if (g.node_count() > kMaxExactNodes) {
    throw SizeLimitError("exact property oracles support at most " +
                         std::to_string(kMaxExactNodes) + " nodes (got " +
                         std::to_string(g.node_count()) + ")");
  }
}

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> bfs(const Graph& g, NodeId src) {
  std::vector<std::size_t> dist(g.node_count(), kUnreached);
  std::queue<NodeId> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

/// Eccentricities; nullopt when the graph is disconnected.
std::optional<std::vector<std::size_t>> eccentricities(const Graph& g) {
  std::vector<std::size_t> ecc(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (std::size_t d : bfs(g, v)) {
      if (d == kUnreached) return std::nullopt;
      ecc[v] = std::max(ecc[v], d);
    }
  }
  return ecc;
}

struct CycleSearch {
  const Graph& g;
  std::size_t words;
  std::vector<Cycle>& out;
  std::vector<NodeId> path;
  std::uint64_t on_path = 0;
  NodeId start = 0;

  void record() {
    Cycle c;
    c.length = path.size();
    c.vertices = on_path;
    c.edges.assign(words, 0);
    for (std::size_t i = 0; i < path.size(); ++i) {
      const std::size_t e = g.edge_index(path[i], path[(i + 1) % path.size()]);
      c.edges[e / 64] |= std::uint64_t{1} << (e % 64);
    }
    out.push_back(std::move(c));
  }

  void extend(NodeId u) {
    for (NodeId w : g.neighbors(u)) {
      if (w == start) {
        // Each cycle is met in both orientations; keep the one whose second
        // vertex is smaller than its last.
        if (path.size() >= 3 && path[1] < path.back()) record();
      } else if (w > start && !(on_path >> w & 1)) {
        path.push_back(w);
        on_path |= std::uint64_t{1} << w;
        extend(w);
        on_path &= ~(std::uint64_t{1} << w);
        path.pop_back();
      }
    }
  }
};

int popcount_all(const std::vector<std::uint64_t>& bits) {
  int n = 0;
  for (auto w : bits) n += std::popcount(w);
  return n;
}

std::int64_t bron_kerbosch(const std::vector<std::uint64_t>& adj, std::uint64_t r_size,
                           std::uint64_t candidates, std::uint64_t excluded) {
  if (candidates == 0 && excluded == 0) return static_cast<std::int64_t>(r_size);
  std::int64_t best = static_cast<std::int64_t>(r_size);
  const std::uint64_t both = candidates | excluded;
  // Pivot: vertex with the most candidate neighbors.
  int pivot = std::countr_zero(both);
  int pivot_score = -1;
  for (std::uint64_t rest = both; rest; rest &= rest - 1) {
    const int u = std::countr_zero(rest);
    const int score = std::popcount(candidates & adj[static_cast<std::size_t>(u)]);
    if (score > pivot_score) {
      pivot = u;
      pivot_score = score;
    }
  }
  std::uint64_t branch = candidates & ~adj[static_cast<std::size_t>(pivot)];
  while (branch) {
    const int v = std::countr_zero(branch);
    const std::uint64_t bit = std::uint64_t{1} << v;
    const auto& nv = adj[static_cast<std::size_t>(v)];
    best = std::max(best, bron_kerbosch(adj, r_size + 1, candidates & nv, excluded & nv));
    candidates &= ~bit;
    excluded |= bit;
    branch &= ~bit;
  }
  return best;
}

}  // namespace

std::vector<Cycle> enumerate_cycles(const Graph& g) {
  require_exact_size(g);
  std::vector<Cycle> cycles;
  CycleSearch search{g, (g.edge_count() + 63) / 64 + 1, cycles, {}, 0, 0};
  for (NodeId s = 0; s < g.node_count(); ++s) {
    search.start = s;
    search.path = {s};
    search.on_path = std::uint64_t{1} << s;
    search.extend(s);
  }
  return cycles;
}

Extended girth(const Graph& g) {
  std::size_t best = 0;
  for (const auto& c : enumerate_cycles(g)) {
    if (best == 0 || c.length < best) best = c.length;
  }
  return best == 0 ? Extended::infinity() : Extended(static_cast<std::int64_t>(best));
}

Extended circumference(const Graph& g) {
  std::size_t best = 0;
  for (const auto& c : enumerate_cycles(g)) best = std::max(best, c.length);
  return best == 0 ? Extended::infinity() : Extended(static_cast<std::int64_t>(best));
}

Extended diameter(const Graph& g) {
  if (g.node_count() == 0) return Extended(0);
  auto ecc = eccentricities(g);
  if (!ecc) return Extended::infinity();
  return Extended(static_cast<std::int64_t>(*std::max_element(ecc->begin(), ecc->end())));
}

Extended radius(const Graph& g) {
  if (g.node_count() == 0) return Extended(0);
  auto ecc = eccentricities(g);
  if (!ecc) return Extended::infinity();
  return Extended(static_cast<std::int64_t>(*std::min_element(ecc->begin(), ecc->end())));
}

std::int64_t count_cycles(const Graph& g) {
  return static_cast<std::int64_t>(enumerate_cycles(g).size());
}

bool has_conjoint_cycle(const Graph& g) {
  const auto cycles = enumerate_cycles(g);
  for (std::size_t a = 0; a < cycles.size(); ++a) {
    for (std::size_t b = a + 1; b < cycles.size(); ++b) {
      std::vector<std::uint64_t> shared(cycles[a].edges.size());
      for (std::size_t w = 0; w < shared.size(); ++w) {
        shared[w] = cycles[a].edges[w] & cycles[b].edges[w];
      }
      if (popcount_all(shared) != 1) continue;
      std::size_t e = 0;
      for (std::size_t w = 0; w < shared.size(); ++w) {
        if (shared[w]) e = w * 64 + static_cast<std::size_t>(std::countr_zero(shared[w]));
      }
      const auto& edge = g.edges()[e];
      const std::uint64_t endpoints = (std::uint64_t{1} << edge.u) | (std::uint64_t{1} << edge.v);
      if ((cycles[a].vertices & cycles[b].vertices) == endpoints) return true;
    }
  }
  return false;
}

std::int64_t max_clique(const Graph& g) {
  require_exact_size(g);
  const std::size_t n = g.node_count();
  if (n == 0) return 0;
  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= std::uint64_t{1} << e.v;
    adj[e.v] |= std::uint64_t{1} << e.u;
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return bron_kerbosch(adj, 0, all, 0);
}

bool has_k_clique(const Graph& g, std::int64_t k) { return max_clique(g) >= k; }

PropertyReport compute_properties(const Graph& g) {
  require_exact_size(g);
  PropertyReport r;
  const auto cycles = enumerate_cycles(g);
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (const auto& c : cycles) {
    lo = lo == 0 ? c.length : std::min(lo, c.length);
    hi = std::max(hi, c.length);
  }
  r.girth = lo == 0 ? Extended::infinity() : Extended(static_cast<std::int64_t>(lo));
  r.circumference = hi == 0 ? Extended::infinity() : Extended(static_cast<std::int64_t>(hi));
  r.diameter = diameter(g);
  r.radius = radius(g);
  r.cycle_count = static_cast<std::int64_t>(cycles.size());
  r.has_conjoint_cycle = has_conjoint_cycle(g);
  r.max_clique = max_clique(g);
  return r;
}

std::string format_properties(const PropertyReport& r) {
  std::ostringstream out;
  out << "girth " << r.girth.str() << "\n"
      << "circumference " << r.circumference.str() << "\n"
      << "diameter " << r.diameter.str() << "\n"
      << "radius " << r.radius.str() << "\n"
      << "cycle_count " << r.cycle_count << "\n"
      << "has_conjoint_cycle " << (r.has_conjoint_cycle ? "true" : "false") << "\n"
      << "max_clique " << r.max_clique << "\n";
  return out.str();
}

std::string properties_json(const PropertyReport& r) {
  auto ext = [](const Extended& e) -> nlohmann::json {
    return e.finite() ? nlohmann::json(e.value()) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["girth"] = ext(r.girth);
  j["circumference"] = ext(r.circumference);
  j["diameter"] = ext(r.diameter);
  j["radius"] = ext(r.radius);
  j["cycle_count"] = r.cycle_count;
  j["has_conjoint_cycle"] = r.has_conjoint_cycle;
  j["max_clique"] = r.max_clique;
  return j.dump(2) + "\n";
}

}  // namespace gnnl
