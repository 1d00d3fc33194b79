#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gnnl/graph.hpp"

namespace gnnl {

enum class ViewMode {
  Ports,     // port-ordered neighborhood: (port i, remote port, neighbor class)
  Multiset,  // unordered neighborhood (1-WL colour refinement)
};

/// Per-round class ids. Ids are canonical: they are assigned in sorted order
/// of the exact signature tuples, so two graphs refined jointly share ids.
struct SignatureTable {
  std::vector<std::vector<std::size_t>> rounds;  // rounds[k][v]

  std::size_t round_count() const { return rounds.size(); }
  const std::vector<std::size_t>& stable() const { return rounds.back(); }
  std::size_t class_count(std::size_t round) const;
};

SignatureTable port_refine(const Graph& g);
SignatureTable multiset_refine(const Graph& g);

struct JointRefinement {
  SignatureTable a;
  SignatureTable b;
};

/// Refines both graphs over one shared signature dictionary until the joint
/// partition stops splitting.
JointRefinement refine_jointly(const Graph& a, const Graph& b, ViewMode mode);

/// Node bijection between two indistinguishable graphs plus the stable
/// classes that certify it: every node of a class, in either graph, has the
/// same features and the same (port-ordered or multiset) view of classes.
struct LocalBijectionWitness {
  ViewMode mode = ViewMode::Ports;
  std::vector<NodeId> mapping;  // node of a -> node of b
  std::vector<std::size_t> class_a;
  std::vector<std::size_t> class_b;
};

struct IndistinguishabilityResult {
  bool indistinguishable = false;
  std::optional<LocalBijectionWitness> witness;  // only for equal node counts
};

/// Throws PortError when either numbering is inconsistent.
IndistinguishabilityResult are_port_locally_isomorphic(const Graph& a, const Graph& b);
IndistinguishabilityResult lu_indistinguishability(const Graph& a, const Graph& b);
bool are_lu_indistinguishable(const Graph& a, const Graph& b);

/// Empty iff the witness is valid; checked from first principles, without
/// re-running refinement.
std::vector<std::string> verify_witness(const Graph& a, const Graph& b,
                                        const LocalBijectionWitness& w);

std::string format_witness(const Graph& a, const Graph& b, const LocalBijectionWitness& w);

}  // namespace gnnl
