#include "gnnl/corpus.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "gnnl/graph_io.hpp"
#include "json.hpp"

namespace gnnl {

std::string to_string(Verdict v) {
  return v == Verdict::Indistinguishable ? "indistinguishable" : "distinguishable";
}

namespace {

struct NodeSpec {
  std::string name;
  char letter;
  Point3 pos;
};

struct EdgeSpec {
  std::string u;
  std::string v;
  int pu;
  int pv;
};

struct GraphSpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  bool positions = true;
};

Graph realize(const GraphSpec& s, std::size_t dim) {
  std::map<std::string, NodeId> index;
  std::vector<Vec> features;
  Graph::Layers layers;
  std::vector<Point3> pos;
  for (const auto& n : s.nodes) {
    const auto slot = static_cast<std::size_t>(n.letter - 'A');
    if (slot >= dim) throw DimensionError("corpus needs feature dimension of at least 4");
    Vec x(dim, 0.0);
    x[slot] = 1.0;
    index[n.name] = features.size();
    features.push_back(std::move(x));
    layers.names.push_back(n.name);
    pos.push_back(n.pos);
  }
  std::vector<Edge> edges;
  std::vector<std::vector<PortRef>> table(s.nodes.size());
  auto place = [&](NodeId at, int port, PortRef ref) {
    auto& row = table[at];
    if (row.size() < static_cast<std::size_t>(port)) row.resize(static_cast<std::size_t>(port));
    row[static_cast<std::size_t>(port - 1)] = ref;
  };
  for (const auto& e : s.edges) {
    const NodeId u = index.at(e.u);
    const NodeId v = index.at(e.v);
    edges.push_back({u, v});
    place(u, e.pu, {v, e.pv});
    place(v, e.pv, {u, e.pu});
  }
  if (s.positions) layers.positions = std::move(pos);
  layers.ports = PortNumbering(std::move(table));
  Graph g(std::move(features), std::move(edges), std::move(layers));
  require_consistent_ports(g);
  return g;
}

constexpr double kSqrt3 = std::numbers::sqrt3;

/// Equilateral triangle B, C, D with unit sides, shifted along x.
std::vector<NodeSpec> triangle(const std::string& suffix, double dx) {
  return {{"B" + suffix, 'B', {dx, 0, 0}},
          {"C" + suffix, 'C', {dx + 1, 0, 0}},
          {"D" + suffix, 'D', {dx + 0.5, kSqrt3 / 2, 0}}};
}

/// Regular polygon with unit sides through `names` in cycle order.
std::vector<NodeSpec> polygon(const std::vector<std::string>& names) {
  const double n = static_cast<double>(names.size());
  const double radius = 0.5 / std::sin(std::numbers::pi / n);
  std::vector<NodeSpec> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / n;
    out.push_back({names[i], names[i][1], {radius * std::cos(t), radius * std::sin(t), 0}});
  }
  return out;
}

/// Unit square A, B, C, D in the z = 0 plane, shifted along x.
std::vector<NodeSpec> square(const std::string& suffix, double dx) {
  return {{"A" + suffix, 'A', {dx, 0, 0}},
          {"B" + suffix, 'B', {dx + 1, 0, 0}},
          {"C" + suffix, 'C', {dx + 1, 1, 0}},
          {"D" + suffix, 'D', {dx, 1, 0}}};
}

template <typename T>
void append(std::vector<T>& to, const std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

const std::vector<std::string> kHexagon = {"uB1", "uC1", "uD1", "uB2", "uC2", "uD2"};
const std::vector<std::string> kOctagon = {"uA1", "uB1", "uC1", "uD1",
                                           "uA2", "uB2", "uC2", "uD2"};

GraphSpec fig1_a() {
  GraphSpec s;
  append(s.nodes, triangle("1", 0));
  append(s.nodes, triangle("2", 3));
  s.edges = {{"B1", "D1", 1, 1}, {"B1", "C1", 2, 1}, {"D1", "C1", 2, 2},
             {"B2", "D2", 1, 2}, {"B2", "C2", 2, 2}, {"D2", "C2", 1, 1}};
  return s;
}

GraphSpec fig1_b() {
  GraphSpec s;
  s.nodes = polygon(kHexagon);
  s.edges = {{"uB1", "uC1", 2, 1}, {"uC1", "uD1", 2, 2}, {"uD1", "uB2", 1, 1},
             {"uB2", "uC2", 2, 2}, {"uD2", "uC2", 2, 1}, {"uD2", "uB1", 1, 1}};
  return s;
}

GraphSpec fig2_a() {
  GraphSpec s;
  append(s.nodes, triangle("1", 0));
  append(s.nodes, triangle("2", 3));
  for (const std::string k : {"1", "2"}) {
    append(s.edges, {{"B" + k, "D" + k, 1, 1}, {"B" + k, "C" + k, 2, 1}, {"D" + k, "C" + k, 2, 2}});
  }
  return s;
}

GraphSpec fig2_b() {
  GraphSpec s;
  s.nodes = polygon(kHexagon);
  s.edges = {{"uB1", "uC1", 2, 1}, {"uC1", "uD1", 2, 2}, {"uD1", "uB2", 1, 1},
             {"uB2", "uC2", 2, 1}, {"uD2", "uC2", 2, 2}, {"uD2", "uB1", 1, 1}};
  return s;
}

std::vector<EdgeSpec> s4_edges(const std::string& k) {
  return {{"A" + k, "B" + k, 1, 1}, {"B" + k, "C" + k, 2, 2},
          {"C" + k, "D" + k, 1, 1}, {"D" + k, "A" + k, 2, 2}};
}

std::vector<EdgeSpec> s8_edges() {
  return {{"uA1", "uB1", 1, 1}, {"uB1", "uC1", 2, 2}, {"uC1", "uD1", 1, 1},
          {"uD1", "uA2", 2, 2}, {"uA2", "uB2", 1, 1}, {"uB2", "uC2", 2, 2},
          {"uC2", "uD2", 1, 1}, {"uD2", "uA1", 2, 2}};
}

GraphSpec fig3_a() {
  GraphSpec s;
  append(s.nodes, square("1", 0));
  append(s.nodes, square("2", 3));
  append(s.edges, s4_edges("1"));
  append(s.edges, s4_edges("2"));
  return s;
}

GraphSpec fig3_b() {
  GraphSpec s;
  s.nodes = polygon(kOctagon);
  s.edges = s8_edges();
  return s;
}

GraphSpec conjoint_a(bool chord) {
  GraphSpec s;
  s.positions = false;
  append(s.nodes, square("1", 0));
  append(s.nodes, square("2", 3));
  for (const std::string k : {"1", "2"}) {
    append(s.edges, s4_edges(k));
    s.edges.push_back({"B" + k, "D" + k, 3, 3});
    if (chord) s.edges.push_back({"A" + k, "C" + k, 3, 3});
  }
  return s;
}

GraphSpec conjoint_b(bool chord) {
  GraphSpec s;
  s.positions = false;
  append(s.nodes, square("1", 0));
  append(s.nodes, square("2", 0));
  for (auto& n : s.nodes) n.name = "u" + n.name;
  // Both squares carry G1's square port table.
  for (const std::string k : {"1", "2"}) {
    append(s.edges, {{"uA" + k, "uB" + k, 1, 1}, {"uB" + k, "uC" + k, 2, 2},
                     {"uC" + k, "uD" + k, 1, 1}, {"uD" + k, "uA" + k, 2, 2}});
    if (chord) s.edges.push_back({"uA" + k, "uC" + k, 3, 3});
  }
  s.edges.push_back({"uB2", "uD1", 3, 3});
  s.edges.push_back({"uD2", "uB1", 3, 3});
  return s;
}

/// Squares on the bottom faces of unit cubes at x = 0 and x = 3.
GraphSpec fig4_a() { return fig3_a(); }

GraphSpec fig4_b() {
  GraphSpec s;
  s.nodes = {{"uA1", 'A', {0, 0, 0}}, {"uB1", 'B', {1, 0, 0}}, {"uC1", 'C', {1, 1, 0}},
             {"uD1", 'D', {0, 1, 0}}, {"uA2", 'A', {0, 1, 1}}, {"uB2", 'B', {1, 1, 1}},
             {"uC2", 'C', {1, 0, 1}}, {"uD2", 'D', {0, 0, 1}}};
  s.edges = s8_edges();
  return s;
}

PropertyReport report(std::int64_t girth, std::int64_t circ, std::optional<std::int64_t> diam,
                      std::optional<std::int64_t> rad, std::int64_t cycles, bool conjoint,
                      std::int64_t clique) {
  auto ext = [](std::optional<std::int64_t> v) { return v ? Extended(*v) : Extended::infinity(); };
  return {Extended(girth), Extended(circ), ext(diam), ext(rad), cycles, conjoint, clique};
}

const PropertyReport kTwoTriangles = report(3, 3, {}, {}, 2, false, 3);
const PropertyReport kHexagonProps = report(6, 6, 3, 3, 1, false, 2);
const PropertyReport kTwoSquares = report(4, 4, {}, {}, 2, false, 2);
const PropertyReport kOctagonProps = report(8, 8, 4, 4, 1, false, 2);
const PropertyReport kTwoThetas = report(3, 4, {}, {}, 6, true, 3);
const PropertyReport kJoinedSquares = report(4, 6, 3, 3, 6, false, 2);
const PropertyReport kTwoK4 = report(3, 4, {}, {}, 14, true, 4);
const PropertyReport kJoinedSquaresChords = report(3, 8, 3, 3, 22, true, 3);

constexpr auto I = Verdict::Indistinguishable;
constexpr auto D = Verdict::Distinguishable;

}  // namespace

std::vector<PropertyDelta> ConstructionPair::deltas() const {
  std::vector<PropertyDelta> out;
  auto add = [&](const char* name, const std::string& va, const std::string& vb) {
    if (va != vb) out.push_back({name, va, vb});
  };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  add("girth", expected_a.girth.str(), expected_b.girth.str());
  add("circumference", expected_a.circumference.str(), expected_b.circumference.str());
  add("diameter", expected_a.diameter.str(), expected_b.diameter.str());
  add("radius", expected_a.radius.str(), expected_b.radius.str());
  add("cycle_count", std::to_string(expected_a.cycle_count), std::to_string(expected_b.cycle_count));
  add("has_conjoint_cycle", b(expected_a.has_conjoint_cycle), b(expected_b.has_conjoint_cycle));
  add("max_clique", std::to_string(expected_a.max_clique), std::to_string(expected_b.max_clique));
  return out;
}

const std::vector<CorpusEntry>& corpus_list() {
  static const std::vector<CorpusEntry> entries = {
      {"fig1_triangles_vs_hexagon", {"fig1"}, "Figure 1: two port-numbered triangles vs a hexagon"},
      {"fig2_alternate_ports", {"fig2"}, "Figure 2: the same pair under another consistent numbering"},
      {"fig3_s4s4_vs_s8", {"fig3", "fig3_s4s8"}, "Figure 3: two copies of S4 vs S8"},
      {"fig3_conjoint_vs_squares", {"fig3_conjoint"}, "Figure 3: two copies of G1 vs G2"},
      {"appendix_4clique", {"4clique"}, "Appendix: G1 and G2 with an added port-3 chord"},
      {"fig4_cubes", {"fig4"}, "Figure 4: S4 and S8 overlaid on unit cubes"},
  };
  return entries;
}

std::string resolve_corpus_name(const std::string& name) {
  for (const auto& e : corpus_list()) {
    if (e.name == name) return e.name;
    for (const auto& a : e.aliases) {
      if (a == name) return e.name;
    }
  }
  throw UnknownNameError("unknown corpus pair '" + name + "'");
}

ConstructionPair build_pair(const std::string& requested, std::size_t dim) {
  const std::string name = resolve_corpus_name(requested);
  ConstructionPair p;
  p.name = name;
  for (const auto& e : corpus_list()) {
    if (e.name == name) p.provenance = e.provenance;
  }
  if (name == "fig1_triangles_vs_hexagon") {
    p.description = "LU-GNNs cannot separate the pair; the port numbering lets CPNGNN do so";
    p.a = realize(fig1_a(), dim);
    p.b = realize(fig1_b(), dim);
    p.verdicts = {{Model::Lu, I}, {Model::Cpn, D}, {Model::Dime, D}};
    p.expected_a = kTwoTriangles;
    p.expected_b = kHexagonProps;
  } else if (name == "fig2_alternate_ports") {
    p.description = "another consistent numbering of the same graphs hides the difference from CPNGNN";
    p.a = realize(fig2_a(), dim);
    p.b = realize(fig2_b(), dim);
    p.verdicts = {{Model::Cpn, I}};
    p.expected_a = kTwoTriangles;
    p.expected_b = kHexagonProps;
  } else if (name == "fig3_s4s4_vs_s8") {
    p.description = "identical port-ordered neighborhoods; planar angles differ";
    p.a = realize(fig3_a(), dim);
    p.b = realize(fig3_b(), dim);
    p.verdicts = {{Model::Lu, I}, {Model::Cpn, I}, {Model::Dime, D}};
    p.expected_a = kTwoSquares;
    p.expected_b = kOctagonProps;
  } else if (name == "fig3_conjoint_vs_squares") {
    p.description = "a conjoint cycle on one side only";
    p.a = realize(conjoint_a(false), dim);
    p.b = realize(conjoint_b(false), dim);
    p.verdicts = {{Model::Lu, I}, {Model::Cpn, I}};
    p.expected_a = kTwoThetas;
    p.expected_b = kJoinedSquares;
  } else if (name == "appendix_4clique") {
    p.description = "a 4-clique on one side only";
    p.a = realize(conjoint_a(true), dim);
    p.b = realize(conjoint_b(true), dim);
    p.verdicts = {{Model::Lu, I}, {Model::Cpn, I}};
    p.expected_a = kTwoK4;
    p.expected_b = kJoinedSquaresChords;
  } else {
    p.description = "equal distances and angles; only dihedral angles differ";
    p.a = realize(fig4_a(), dim);
    p.b = realize(fig4_b(), dim);
    p.verdicts = {{Model::Dime, I}, {Model::DimePorts, I}, {Model::Hdcpn, D}};
    p.expected_a = kTwoSquares;
    p.expected_b = kOctagonProps;
  }

  if (compute_properties(p.a) != p.expected_a) {
    throw Error(name + ": graph a does not have its declared properties");
  }
  if (compute_properties(p.b) != p.expected_b) {
    throw Error(name + ": graph b does not have its declared properties");
  }
  return p;
}

std::string manifest_json(const ConstructionPair& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["provenance"] = p.provenance;
  j["description"] = p.description;
  j["graph_a"] = p.name + "_a.json";
  j["graph_b"] = p.name + "_b.json";
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
  for (const auto& v : p.verdicts) verdicts[to_string(v.model)] = to_string(v.verdict);
  j["expected_verdicts"] = verdicts;
  j["properties_a"] = nlohmann::ordered_json::parse(properties_json(p.expected_a));
  j["properties_b"] = nlohmann::ordered_json::parse(properties_json(p.expected_b));
  nlohmann::ordered_json deltas = nlohmann::ordered_json::array();
  for (const auto& d : p.deltas()) {
    deltas.push_back({{"property", d.property}, {"a", d.value_a}, {"b", d.value_b}});
  }
  j["property_deltas"] = deltas;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_pair(const ConstructionPair& p,
                                             const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::vector<std::filesystem::path> paths = {dir / (p.name + "_a.json"),
                                                    dir / (p.name + "_b.json"),
                                                    dir / (p.name + ".manifest.json")};
  save_graph(p.a, paths[0]);
  save_graph(p.b, paths[1]);
  write_file_atomic(paths[2], manifest_json(p));
  return paths;
}

}  // namespace gnnl
