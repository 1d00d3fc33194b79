#include "gnnl/trees.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace gnnl {

std::size_t ComputationTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

ComputationTree unroll(const Graph& g, NodeId u, std::size_t depth, std::optional<PortPair> label) {
  ComputationTree t;
  t.features = g.features(u);
  t.source = u;
  t.depth = depth;
  t.label = label;
  if (depth == 0) return t;
  if (g.has_ports()) {
    const auto& row = g.ports().ports_of(u);
    t.children.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      t.children.push_back(
          unroll(g, row[i].node, depth - 1, PortPair{static_cast<int>(i) + 1, row[i].port}));
    }
  } else {
    t.children.reserve(g.degree(u));
    for (NodeId w : g.neighbors(u)) t.children.push_back(unroll(g, w, depth - 1, std::nullopt));
  }
  return t;
}

void append_features(std::string& out, const Vec& x) {
  char buf[64];
  out += '[';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%a", x[i]);
    out += buf;
  }
  out += ']';
}

}  // namespace

ComputationTree unroll_tree(const Graph& g, NodeId root, std::size_t depth) {
  if (root >= g.node_count()) throw Error("root is not a node of the graph");
  if (g.has_ports()) require_consistent_ports(g);
  return unroll(g, root, depth, std::nullopt);
}

std::string canonical_tree_key(const ComputationTree& t) {
  std::string out = "(";
  append_features(out, t.features);
  std::vector<std::string> child_keys;
  child_keys.reserve(t.children.size());
  bool labeled = false;
  for (const auto& c : t.children) {
    std::string k;
    if (c.label) {
      labeled = true;
      k = "<" + std::to_string(c.label->first) + ":" + std::to_string(c.label->second) + ">";
    }
    k += canonical_tree_key(c);
    child_keys.push_back(std::move(k));
  }
  if (!labeled) std::sort(child_keys.begin(), child_keys.end());
  for (const auto& k : child_keys) out += k;
  out += ')';
  return out;
}

TreeDistribution tree_distribution(const Graph& g, std::size_t depth) {
  TreeDistribution dist;
  dist.node_count = g.node_count();
  dist.depth = depth;
  std::map<std::string, TreeDistribution::Entry> grouped;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ComputationTree t = unroll_tree(g, v, depth);
    std::string key = canonical_tree_key(t);
    auto [it, inserted] = grouped.try_emplace(key);
    if (inserted) {
      it->second.key = key;
      it->second.representative = std::move(t);
    }
    ++it->second.count;
  }
  for (auto& [key, entry] : grouped) {
    entry.weight = static_cast<double>(entry.count) / static_cast<double>(g.node_count());
    dist.entries.push_back(std::move(entry));
  }
  return dist;
}

}  // namespace gnnl
