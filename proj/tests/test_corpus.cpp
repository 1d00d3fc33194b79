#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "gnnl/corpus.hpp"
#include "gnnl/graph_io.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gnnl;
namespace ts = testing_support;

namespace {

/// girth, circumference, diameter, radius (-1 = infinite), cycles, conjoint, clique.
struct Row {
  std::int64_t girth, circ, diam, rad, cycles;
  bool conjoint;
  std::int64_t clique;
};

constexpr Row kTwoTriangles{3, 3, -1, -1, 2, false, 3};
constexpr Row kHexagon{6, 6, 3, 3, 1, false, 2};
constexpr Row kTwoSquares{4, 4, -1, -1, 2, false, 2};
constexpr Row kOctagon{8, 8, 4, 4, 1, false, 2};
constexpr Row kTwoThetas{3, 4, -1, -1, 6, true, 3};
constexpr Row kJoinedSquares{4, 6, 3, 3, 6, false, 2};
constexpr Row kTwoK4{3, 4, -1, -1, 14, true, 4};
constexpr Row kJoinedSquaresChords{3, 8, 3, 3, 22, true, 3};

struct Expectation {
  const char* name;
  Row a;
  Row b;
};

const Expectation kTable[] = {
    {"fig1_triangles_vs_hexagon", kTwoTriangles, kHexagon},
    {"fig2_alternate_ports", kTwoTriangles, kHexagon},
    {"fig3_s4s4_vs_s8", kTwoSquares, kOctagon},
    {"fig3_conjoint_vs_squares", kTwoThetas, kJoinedSquares},
    {"appendix_4clique", kTwoK4, kJoinedSquaresChords},
    {"fig4_cubes", kTwoSquares, kOctagon},
};

void check_row_by_reference(const Graph& g, const Row& row) {
  const auto [diam, rad] = ts::diameter_radius(g);
  CHECK(ts::girth_oracle(g) == row.girth);
  CHECK(ts::circumference_oracle(g) == row.circ);
  CHECK(diam == row.diam);
  CHECK(rad == row.rad);
  CHECK(static_cast<std::int64_t>(ts::cycle_edge_sets(g).size()) == row.cycles);
  CHECK(ts::conjoint_oracle(g) == row.conjoint);
  CHECK(ts::clique_oracle(g) == row.clique);
}

void check_row_by_library(const PropertyReport& r, const Row& row) {
  auto v = [](const Extended& e) { return e.finite() ? e.value() : std::int64_t{-1}; };
  CHECK(v(r.girth) == row.girth);
  CHECK(v(r.circumference) == row.circ);
  CHECK(v(r.diameter) == row.diam);
  CHECK(v(r.radius) == row.rad);
  CHECK(r.cycle_count == row.cycles);
  CHECK(r.has_conjoint_cycle == row.conjoint);
  CHECK(r.max_clique == row.clique);
}

}  // namespace

TEST_CASE("the corpus lists six pairs and resolves aliases") {
  REQUIRE(corpus_list().size() == 6);
  CHECK(resolve_corpus_name("fig1") == "fig1_triangles_vs_hexagon");
  CHECK(resolve_corpus_name("fig3_s4s8") == "fig3_s4s4_vs_s8");
  CHECK(resolve_corpus_name("fig3") == "fig3_s4s4_vs_s8");
  CHECK(resolve_corpus_name("4clique") == "appendix_4clique");
  CHECK(resolve_corpus_name("fig4_cubes") == "fig4_cubes");
  CHECK_THROWS_AS(resolve_corpus_name("fig9"), UnknownNameError);
  for (const auto& e : corpus_list()) CHECK_FALSE(e.provenance.empty());
}

TEST_CASE("every pair carries its declared properties, checked by brute force") {
  for (const auto& row : kTable) {
    CAPTURE(row.name);
    const ConstructionPair p = build_pair(row.name);
    check_row_by_reference(p.a, row.a);
    check_row_by_reference(p.b, row.b);
    check_row_by_library(p.expected_a, row.a);
    check_row_by_library(p.expected_b, row.b);
    CHECK_FALSE(p.verdicts.empty());
  }
}

TEST_CASE("the pairs have equal size and consistent port tables") {
  for (const auto& e : corpus_list()) {
    const ConstructionPair p = build_pair(e.name);
    CAPTURE(e.name);
    CHECK(p.a.node_count() == p.b.node_count());
    CHECK(p.a.edge_count() == p.b.edge_count());
    REQUIRE(p.a.has_ports());
    REQUIRE(p.b.has_ports());
    CHECK(validate_ports(p.a).empty());
    CHECK(validate_ports(p.b).empty());
    CHECK(p.a.feature_dim() == 8);
    // Each pair is regular-looking to refinement: equal degree sequences.
    std::vector<std::size_t> da;
    std::vector<std::size_t> db;
    for (NodeId v = 0; v < p.a.node_count(); ++v) da.push_back(p.a.degree(v));
    for (NodeId v = 0; v < p.b.node_count(); ++v) db.push_back(p.b.degree(v));
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    CHECK(da == db);
  }
}

TEST_CASE("geometric pairs share every edge length and bond angle") {
  for (const char* name : {"fig3_s4s4_vs_s8", "fig4_cubes"}) {
    const ConstructionPair p = build_pair(name);
    REQUIRE(p.a.has_positions());
    REQUIRE(p.b.has_positions());
    auto lengths = [](const Graph& g) {
      std::vector<double> out;
      for (const auto& e : g.edges()) out.push_back(distance(g.position(e.u), g.position(e.v)));
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto la = lengths(p.a);
    const auto lb = lengths(p.b);
    REQUIRE(la.size() == lb.size());
    for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i] == doctest::Approx(lb[i]));
  }
}

TEST_CASE("the appendix pair differs in clique number and connectivity") {
  const ConstructionPair p = build_pair("appendix_4clique");
  const auto deltas = p.deltas();
  auto has = [&](const std::string& prop, const std::string& a, const std::string& b) {
    for (const auto& d : deltas) {
      if (d.property == prop) return d.value_a == a && d.value_b == b;
    }
    return false;
  };
  CHECK(has("max_clique", "4", "3"));
  CHECK(has("diameter", "inf", "3"));
  CHECK(has("radius", "inf", "3"));
}

TEST_CASE("feature dimension is configurable but bounded below") {
  CHECK(build_pair("fig1", 12).a.feature_dim() == 12);
  CHECK_THROWS_AS(build_pair("fig1", 2), DimensionError);
}

TEST_CASE("emitted files load back to the same graphs") {
  const auto dir = std::filesystem::temp_directory_path() / "gnnl_test_corpus_emit";
  std::filesystem::remove_all(dir);
  const ConstructionPair p = build_pair("fig4");
  const auto paths = emit_pair(p, dir);
  REQUIRE(paths.size() == 3);
  CHECK(load_graph(dir / "fig4_cubes_a.json") == p.a);
  CHECK(load_graph(dir / "fig4_cubes_b.json") == p.b);
  const auto manifest = nlohmann::json::parse(read_file(dir / "fig4_cubes.manifest.json"));
  CHECK(manifest.at("name") == "fig4_cubes");
  CHECK(manifest.dump().find("hdcpn") != std::string::npos);
  std::filesystem::remove_all(dir);
}
