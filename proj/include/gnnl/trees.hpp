#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnnl/graph.hpp"

namespace gnnl {

/// (local port at the parent, remote port at the child).
using PortPair = std::pair<int, int>;

/// Depth-L unrolling of a node's neighborhood. Children of a tree node for
/// graph node u are all of neigh(u), including the parent (walks, not paths).
struct ComputationTree {
  Vec features;
  NodeId source = 0;      // graph node this tree node was unrolled from
  std::size_t depth = 0;  // remaining unrolling depth; leaves have 0
  std::optional<PortPair> label;  // label of the edge to the parent
  std::vector<ComputationTree> children;

  std::size_t size() const;
};

/// Children follow local port order when g has ports, ascending node order otherwise.
ComputationTree unroll_tree(const Graph& g, NodeId root, std::size_t depth);

/// Canonical serialization. Unlabeled children are compared as a multiset;
/// port-labeled children keep their port order. Features are written in
/// hexadecimal floating point so equal keys mean bit-equal features.
std::string canonical_tree_key(const ComputationTree& t);

struct TreeDistribution {
  struct Entry {
    std::string key;
    double weight = 0.0;
    std::size_t count = 0;
    ComputationTree representative;
  };
  std::vector<Entry> entries;  // sorted by key
  std::size_t node_count = 0;
  std::size_t depth = 0;
};

TreeDistribution tree_distribution(const Graph& g, std::size_t depth);

}  // namespace gnnl
