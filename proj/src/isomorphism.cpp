#include "gnnl/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace gnnl {

std::size_t SignatureTable::class_count(std::size_t round) const {
  const auto& r = rounds.at(round);
  return std::set<std::size_t>(r.begin(), r.end()).size();
}

namespace {

using Signature = std::vector<long long>;

/// Signature of v given the previous round's classes (exact tuple, no hashing).
Signature signature(const Graph& g, NodeId v, const std::vector<std::size_t>& prev, ViewMode mode) {
  Signature sig;
  sig.push_back(static_cast<long long>(prev[v]));
  if (mode == ViewMode::Ports) {
    const auto& row = g.ports().ports_of(v);
    sig.push_back(static_cast<long long>(row.size()));
    for (const auto& ref : row) {
      sig.push_back(ref.port);
      sig.push_back(static_cast<long long>(prev[ref.node]));
    }
  } else {
    std::vector<long long> nb;
    for (NodeId u : g.neighbors(v)) nb.push_back(static_cast<long long>(prev[u]));
    std::sort(nb.begin(), nb.end());
    sig.push_back(static_cast<long long>(nb.size()));
    sig.insert(sig.end(), nb.begin(), nb.end());
  }
  return sig;
}

std::vector<SignatureTable> refine_all(const std::vector<const Graph*>& graphs, ViewMode mode) {
  if (mode == ViewMode::Ports) {
    for (const Graph* g : graphs) require_consistent_ports(*g);
  }
  std::vector<SignatureTable> tables(graphs.size());

  std::map<Vec, std::size_t> feature_ids;
  for (const Graph* g : graphs) {
    for (const auto& x : g->all_features()) feature_ids.emplace(x, 0);
  }
  std::size_t next = 0;
  for (auto& [x, id] : feature_ids) id = next++;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    std::vector<std::size_t> r0;
    for (const auto& x : graphs[k]->all_features()) r0.push_back(feature_ids.at(x));
    tables[k].rounds.push_back(std::move(r0));
  }
  std::size_t classes = feature_ids.size();

  std::size_t total_nodes = 0;
  for (const Graph* g : graphs) total_nodes += g->node_count();

  for (std::size_t round = 0; round <= total_nodes; ++round) {
    std::map<Signature, std::size_t> ids;
    std::vector<std::vector<Signature>> sigs(graphs.size());
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      const auto& prev = tables[k].rounds.back();
      for (NodeId v = 0; v < graphs[k]->node_count(); ++v) {
        sigs[k].push_back(signature(*graphs[k], v, prev, mode));
        ids.emplace(sigs[k].back(), 0);
      }
    }
    next = 0;
    for (auto& [sig, id] : ids) id = next++;
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      std::vector<std::size_t> r;
      for (const auto& sig : sigs[k]) r.push_back(ids.at(sig));
      tables[k].rounds.push_back(std::move(r));
    }
    // The new signature embeds the old class, so the partition only refines;
    // an unchanged class count means a fixpoint.
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return tables;
}

std::vector<std::size_t> sorted_copy(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

IndistinguishabilityResult decide(const Graph& a, const Graph& b, ViewMode mode) {
  auto joint = refine_jointly(a, b, mode);
  IndistinguishabilityResult result;
  const auto& ca = joint.a.stable();
  const auto& cb = joint.b.stable();
  if (a.node_count() == b.node_count()) {
    result.indistinguishable = sorted_copy(ca) == sorted_copy(cb);
  } else {
    // Unequal sizes: mutual covering holds iff both graphs realise the same set of classes.
    result.indistinguishable = std::set<std::size_t>(ca.begin(), ca.end()) ==
                               std::set<std::size_t>(cb.begin(), cb.end());
  }
  if (!result.indistinguishable || a.node_count() != b.node_count()) return result;

  LocalBijectionWitness w;
  w.mode = mode;
  w.class_a = ca;
  w.class_b = cb;
  w.mapping.assign(a.node_count(), 0);
  std::map<std::size_t, std::vector<NodeId>> members_b;
  for (NodeId v = 0; v < b.node_count(); ++v) members_b[cb[v]].push_back(v);
  std::map<std::size_t, std::size_t> used;
  for (NodeId v = 0; v < a.node_count(); ++v) {
    w.mapping[v] = members_b[ca[v]][used[ca[v]]++];
  }
  result.witness = std::move(w);
  return result;
}

}  // namespace

SignatureTable port_refine(const Graph& g) { return refine_all({&g}, ViewMode::Ports).front(); }

SignatureTable multiset_refine(const Graph& g) {
  return refine_all({&g}, ViewMode::Multiset).front();
}

JointRefinement refine_jointly(const Graph& a, const Graph& b, ViewMode mode) {
  auto tables = refine_all({&a, &b}, mode);
  return {std::move(tables[0]), std::move(tables[1])};
}

IndistinguishabilityResult are_port_locally_isomorphic(const Graph& a, const Graph& b) {
  return decide(a, b, ViewMode::Ports);
}

IndistinguishabilityResult lu_indistinguishability(const Graph& a, const Graph& b) {
  return decide(a, b, ViewMode::Multiset);
}

bool are_lu_indistinguishable(const Graph& a, const Graph& b) {
  return lu_indistinguishability(a, b).indistinguishable;
}

namespace {

struct LocalView {
  Vec features;
  std::vector<std::pair<int, std::size_t>> neighbors;  // (remote port or 0, neighbor class)

  friend bool operator==(const LocalView&, const LocalView&) = default;
};

LocalView view_of(const Graph& g, NodeId v, const std::vector<std::size_t>& cls, ViewMode mode) {
  LocalView view{g.features(v), {}};
  if (mode == ViewMode::Ports) {
    for (const auto& ref : g.ports().ports_of(v)) view.neighbors.push_back({ref.port, cls[ref.node]});
  } else {
    for (NodeId u : g.neighbors(v)) view.neighbors.push_back({0, cls[u]});
    std::sort(view.neighbors.begin(), view.neighbors.end());
  }
  return view;
}

}  // namespace

std::vector<std::string> verify_witness(const Graph& a, const Graph& b,
                                        const LocalBijectionWitness& w) {
  std::vector<std::string> problems;
  const std::size_t n = a.node_count();
  if (b.node_count() != n || w.mapping.size() != n || w.class_a.size() != n ||
      w.class_b.size() != n) {
    problems.push_back("witness sizes do not match the graphs");
    return problems;
  }
  if (w.mode == ViewMode::Ports) {
    if (!validate_ports(a).empty()) problems.push_back("first graph has inconsistent ports");
    if (!validate_ports(b).empty()) problems.push_back("second graph has inconsistent ports");
    if (!problems.empty()) return problems;
  }

  std::vector<bool> hit(n, false);
  for (NodeId v = 0; v < n; ++v) {
    const NodeId t = w.mapping[v];
    if (t >= n || hit[t]) {
      problems.push_back("mapping is not a bijection at " + a.name(v));
      return problems;
    }
    hit[t] = true;
    if (a.features(v) != b.features(t)) {
      problems.push_back("features differ: " + a.name(v) + " -> " + b.name(t));
    }
    if (w.class_a[v] != w.class_b[t]) {
      problems.push_back("mapping leaves its class: " + a.name(v) + " -> " + b.name(t));
    }
  }

  // Every member of a class, in either graph, must present one local view.
  std::map<std::size_t, std::pair<LocalView, std::string>> reference;
  auto check = [&](const Graph& g, const std::vector<std::size_t>& cls, NodeId v) {
    LocalView view = view_of(g, v, cls, w.mode);
    auto [it, inserted] = reference.try_emplace(cls[v], view, g.name(v));
    if (!inserted && !(it->second.first == view)) {
      problems.push_back("class " + std::to_string(cls[v]) + " is not uniform: " + g.name(v) +
                         " differs from " + it->second.second);
    }
  };
  for (NodeId v = 0; v < n; ++v) check(a, w.class_a, v);
  for (NodeId v = 0; v < n; ++v) check(b, w.class_b, v);
  return problems;
}

std::string format_witness(const Graph& a, const Graph& b, const LocalBijectionWitness& w) {
  std::ostringstream out;
  for (NodeId v = 0; v < w.mapping.size(); ++v) {
    const NodeId t = w.mapping[v];
    out << a.name(v) << " -> " << b.name(t) << "  (class " << w.class_a[v] << ")";
    if (w.mode == ViewMode::Ports) {
      out << "  ports:";
      const auto& ra = a.ports().ports_of(v);
      const auto& rb = b.ports().ports_of(t);
      for (std::size_t i = 0; i < ra.size() && i < rb.size(); ++i) {
        out << " " << i + 1 << ":" << a.name(ra[i].node) << "/" << b.name(rb[i].node) << "@"
            << ra[i].port;
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace gnnl
