#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "gnnl/engines.hpp"
#include "gnnl/isomorphism.hpp"
#include "support.hpp"

using namespace gnnl;
namespace ts = testing_support;

namespace {

/// Textbook refinement over both graphs at once, with string colours and a
/// fixed n rounds. Returns each graph's colour histogram.
std::pair<std::map<std::string, int>, std::map<std::string, int>> reference_histograms(
    const Graph& a, const Graph& b, bool ports) {
  const Graph* gs[2] = {&a, &b};
  std::vector<std::string> colour[2];
  for (int k = 0; k < 2; ++k) {
    for (NodeId v = 0; v < gs[k]->node_count(); ++v) {
      std::ostringstream s;
      for (double x : gs[k]->features(v)) s << x << ',';
      colour[k].push_back(s.str());
    }
  }
  const std::size_t rounds = a.node_count() + b.node_count() + 1;
  for (std::size_t r = 0; r < rounds; ++r) {
    std::map<std::string, std::string> compress;
    std::vector<std::string> raw[2];
    for (int k = 0; k < 2; ++k) {
      const Graph& g = *gs[k];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        std::vector<std::string> parts;
        if (ports) {
          for (const auto& ref : g.ports().ports_of(v)) {
            parts.push_back(std::to_string(ref.port) + ":" + colour[k][ref.node]);
          }
        } else {
          for (NodeId u : g.neighbors(v)) parts.push_back(colour[k][u]);
          std::sort(parts.begin(), parts.end());
        }
        std::string sig = colour[k][v] + "|";
        for (const auto& p : parts) sig += p + ";";
        raw[k].push_back(sig);
        compress.emplace(sig, "");
      }
    }
    std::size_t id = 0;
    for (auto& [sig, c] : compress) c = "c" + std::to_string(id++);
    for (int k = 0; k < 2; ++k) {
      for (NodeId v = 0; v < gs[k]->node_count(); ++v) colour[k][v] = compress.at(raw[k][v]);
    }
  }
  std::map<std::string, int> h[2];
  for (int k = 0; k < 2; ++k) {
    for (const auto& c : colour[k]) ++h[k][c];
  }
  return {h[0], h[1]};
}

bool reference_equal_size_verdict(const Graph& a, const Graph& b, bool ports) {
  const auto [ha, hb] = reference_histograms(a, b, ports);
  return ha == hb;
}

Graph cycle_union(const std::vector<std::size_t>& lengths, std::size_t dim = 2) {
  std::vector<Edge> edges;
  std::size_t base = 0;
  for (std::size_t len : lengths) {
    for (std::size_t i = 0; i < len; ++i) edges.push_back({base + i, base + (i + 1) % len});
    base += len;
  }
  Vec x(dim, 0.0);
  x[0] = 1.0;
  return Graph(std::vector<Vec>(base, x), edges);
}

/// Cycle unions built by cycle_union, numbered so port 1 follows the cycle
/// forward and port 2 leads back.
Graph oriented(const Graph& g) {
  std::vector<std::pair<int, int>> ports;
  for (const auto& e : g.edges()) {
    // Within a cycle the only non-consecutive edge is the closing one.
    ports.push_back(e.v == e.u + 1 ? std::pair{1, 2} : std::pair{2, 1});
  }
  return g.with_ports(ports_from_edges(g, ports));
}

double cpn_gap(const Graph& a, const Graph& b, std::mt19937_64& rng) {
  const GnnParams params = random_params(a.feature_dim(), 3, rng);
  const Vector ra = readout(cpn_forward(a, params), Readout::Sum);
  const Vector rb = readout(cpn_forward(b, params), Readout::Sum);
  return (ra - rb).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("a relabeled copy is indistinguishable with a verified witness") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const Graph g = ts::random_graph(3 + t % 8, 0.4, rng, 3, false, true);
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = g.permuted(perm);
    for (const auto& result : {are_port_locally_isomorphic(g, h), lu_indistinguishability(g, h)}) {
      REQUIRE(result.indistinguishable);
      REQUIRE(result.witness.has_value());
      CHECK(verify_witness(g, h, *result.witness).empty());
    }
  }
}

TEST_CASE("a corrupted witness is rejected") {
  // Path on four nodes: ends and middles fall in different classes.
  const Graph a(std::vector<Vec>(4, Vec{1.0}), {{0, 1}, {1, 2}, {2, 3}});
  const auto r = lu_indistinguishability(a, a);
  REQUIRE(r.witness);
  CHECK(verify_witness(a, a, *r.witness).empty());
  auto w = *r.witness;
  std::swap(w.mapping[0], w.mapping[1]);
  CHECK_FALSE(verify_witness(a, a, w).empty());
  w = *r.witness;
  w.mapping[1] = w.mapping[0];
  CHECK_FALSE(verify_witness(a, a, w).empty());
}

TEST_CASE("unordered refinement cannot separate equal-length cycle unions") {
  const Graph c6 = cycle_union({6});
  const Graph c33 = cycle_union({3, 3});
  CHECK(are_lu_indistinguishable(c6, c33));
  const auto r = lu_indistinguishability(c6, c33);
  REQUIRE(r.witness);
  CHECK(verify_witness(c6, c33, *r.witness).empty());
  CHECK(are_lu_indistinguishable(cycle_union({4, 5}), cycle_union({9})));
  // A path is not regular, so it separates.
  const Graph path(std::vector<Vec>(3, Vec{1.0, 0.0}), {{0, 1}, {1, 2}});
  CHECK_FALSE(are_lu_indistinguishable(path, cycle_union({3})));
}

TEST_CASE("unequal sizes compare the sets of realised classes") {
  CHECK(are_lu_indistinguishable(cycle_union({3}), cycle_union({4, 5})));
  const auto r = lu_indistinguishability(cycle_union({3}), cycle_union({4, 5}));
  CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("refinement verdicts agree with a string-colour reference") {
  std::mt19937_64 rng(77);
  int agree_true = 0;
  for (int t = 0; t < 120; ++t) {
    const std::size_t n = 4 + t % 6;
    Graph a = ts::random_graph(n, 0.5, rng, 2);
    Graph b = ts::random_graph(n, 0.5, rng, 2);
    if (t % 3 == 0) {
      // Regular pairs with uniform features are frequently indistinguishable.
      a = cycle_union({n});
      b = n >= 6 ? cycle_union({3, n - 3}) : cycle_union({n});
    }
    const bool ports = t % 2 == 0;
    if (ports) {
      a = a.with_ports(generate_consistent_ports(a, rng() % 3));
      b = b.with_ports(generate_consistent_ports(b, rng() % 3));
    }
    const bool expected = reference_equal_size_verdict(a, b, ports);
    const auto got = ports ? are_port_locally_isomorphic(a, b) : lu_indistinguishability(a, b);
    CAPTURE(t);
    CHECK(got.indistinguishable == expected);
    if (got.indistinguishable) {
      ++agree_true;
      REQUIRE(got.witness);
      CHECK(verify_witness(a, b, *got.witness).empty());
    }
  }
  CHECK(agree_true > 10);
}

TEST_CASE("port-local isomorphism implies equal port-aware embeddings") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 6; n <= 12; n += 2) {
    // Oriented cycles: port 1 leads forward, port 2 back, at every node.
    const Graph a = oriented(cycle_union({n}, 4));
    const Graph b = oriented(cycle_union({n / 2, n / 2}, 4));
    const auto r = are_port_locally_isomorphic(a, b);
    REQUIRE(r.indistinguishable);
    REQUIRE(r.witness);
    CHECK(verify_witness(a, b, *r.witness).empty());
    for (int t = 0; t < 20; ++t) CHECK(cpn_gap(a, b, rng) < 1e-9);
  }
  // A numbering that breaks the orientation on one cycle separates the pair.
  const Graph a = oriented(cycle_union({6}, 4));
  const Graph c = cycle_union({3, 3}, 4);
  const Graph b = c.with_ports(ascending_ports(c));
  CHECK_FALSE(are_port_locally_isomorphic(a, b).indistinguishable);
}

TEST_CASE("port refinement needs consistent tables") {
  const Graph g({{1.0}, {1.0}, {1.0}}, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(port_refine(g), MissingLayerError);
  const Graph bad = g.with_ports(PortNumbering({{{1, 2}}, {{0, 1}, {2, 1}}, {{1, 2}}}));
  CHECK_THROWS_AS(are_port_locally_isomorphic(bad, bad), PortError);
}

TEST_CASE("refinement rounds only split classes") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Graph g = ts::random_graph(9, 0.35, rng, 2);
    const auto table = multiset_refine(g);
    for (std::size_t r = 1; r < table.round_count(); ++r) {
      CHECK(table.class_count(r) >= table.class_count(r - 1));
      for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
          if (table.rounds[r][u] == table.rounds[r][v]) {
            CHECK(table.rounds[r - 1][u] == table.rounds[r - 1][v]);
          }
        }
      }
    }
  }
}
