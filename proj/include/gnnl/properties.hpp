#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnl/graph.hpp"

namespace gnnl {

/// Integer graph quantity that may be infinite (forests, disconnected graphs).
class Extended {
 public:
  constexpr Extended() = default;
  constexpr explicit Extended(std::int64_t v) : value_(v) {}
  static constexpr Extended infinity() { return Extended(); }

  constexpr bool finite() const { return value_.has_value(); }
  constexpr std::int64_t value() const { return value_.value(); }
  std::string str() const { return finite() ? std::to_string(*value_) : "inf"; }

  friend constexpr bool operator==(const Extended&, const Extended&) = default;
  friend constexpr bool operator<=(const Extended& a, const Extended& b) {
    if (!b.finite()) return true;
    return a.finite() && *a.value_ <= *b.value_;
  }

 private:
  std::optional<std::int64_t> value_;
};

struct PropertyReport {
  Extended girth;
  Extended circumference;
  Extended diameter;
  Extended radius;
  std::int64_t cycle_count = 0;
  bool has_conjoint_cycle = false;
  std::int64_t max_clique = 0;

  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

/// A simple cycle as its vertex set and edge set (edge ids index g.edges()).
struct Cycle {
  std::uint64_t vertices = 0;
  std::vector<std::uint64_t> edges;  // bitset over edge ids
  std::size_t length = 0;
};

/// Every simple cycle exactly once (identity = undirected edge set).
/// Throws SizeLimitError above kMaxExactNodes.
std::vector<Cycle> enumerate_cycles(const Graph& g);

Extended girth(const Graph& g);
Extended circumference(const Graph& g);
Extended diameter(const Graph& g);
Extended radius(const Graph& g);
std::int64_t count_cycles(const Graph& g);
/// Two simple cycles whose edge sets meet in exactly one edge and whose
/// vertex sets meet in exactly that edge's endpoints.
bool has_conjoint_cycle(const Graph& g);
std::int64_t max_clique(const Graph& g);
bool has_k_clique(const Graph& g, std::int64_t k);

PropertyReport compute_properties(const Graph& g);

/// "girth 4\n..." one key per line.
std::string format_properties(const PropertyReport& r);
std::string properties_json(const PropertyReport& r);

}  // namespace gnnl
