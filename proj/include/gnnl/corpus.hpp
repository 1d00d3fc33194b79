#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gnnl/engines.hpp"
#include "gnnl/graph.hpp"
#include "gnnl/properties.hpp"

namespace gnnl {

enum class Verdict { Indistinguishable, Distinguishable };

std::string to_string(Verdict v);

struct ExpectedVerdict {
  Model model;
  Verdict verdict;
};

struct PropertyDelta {
  std::string property;
  std::string value_a;
  std::string value_b;
};

/// A named counterexample pair with the verdicts and property values it is
/// built to exhibit.
struct ConstructionPair {
  std::string name;
  std::string provenance;  // which figure or construction it transcribes
  std::string description;
  Graph a;
  Graph b;
  std::vector<ExpectedVerdict> verdicts;
  PropertyReport expected_a;
  PropertyReport expected_b;

  /// Properties whose expected values differ between a and b.
  std::vector<PropertyDelta> deltas() const;
};

struct CorpusEntry {
  std::string name;
  std::vector<std::string> aliases;
  std::string provenance;
};

/// Stable order.
const std::vector<CorpusEntry>& corpus_list();

/// Canonical name for a name or alias; throws Error when unknown.
std::string resolve_corpus_name(const std::string& name);

/// Features are one-hot by letter, padded to `dim`. Ports are validated and
/// expected properties checked against the oracles; a mismatch throws Error.
ConstructionPair build_pair(const std::string& name, std::size_t dim = 8);

std::string manifest_json(const ConstructionPair& p);

/// Writes <name>_a.json, <name>_b.json and <name>.manifest.json into `dir`.
std::vector<std::filesystem::path> emit_pair(const ConstructionPair& p,
                                             const std::filesystem::path& dir);

}  // namespace gnnl
