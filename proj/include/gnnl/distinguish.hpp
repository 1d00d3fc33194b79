#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnnl/corpus.hpp"
#include "gnnl/engines.hpp"

namespace gnnl {

/// Largest gap an indistinguishable pair may show (float accumulation only).
inline constexpr double kIndistinguishableGap = 1e-7;

struct TrialConfig {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::size_t dim = 8;
  std::size_t layers = 3;
  double tol = 1e-6;
  double cap = 1.0;  // cap on ||W1||_2, ||W2||_2 and ||beta||_2
  Readout readout = Readout::Sum;
};

struct TrialGap {
  double sum = 0.0;   // ||readout_a - readout_b||_inf per readout mode
  double mean = 0.0;
  double max = 0.0;
  double f = 0.0;     // |f(G_a) - f(G_b)|
};

struct TrialReport {
  std::string label;
  Model model = Model::Lu;
  TrialConfig config;
  std::vector<TrialGap> gaps;  // by trial index
  TrialGap max_gap;
  double decisive_gap = 0.0;  // max over trials of the configured readout gap and the f gap
  std::optional<std::size_t> separating_trial;
  Verdict verdict = Verdict::Indistinguishable;
};

/// Trial t draws its parameters from mt19937_64 seeded by
/// seed_seq{low 32 bits of seed, high 32 bits of seed, t}.
/// Throws MissingLayerError when a graph lacks a layer the model reads.
TrialReport run_trials(const Graph& a, const Graph& b, Model model, const TrialConfig& config,
                       const std::string& label = "pair");

/// Multiset refinement without ports, port-local isomorphism with ports.
Verdict refinement_verdict(const Graph& a, const Graph& b, bool with_ports);

std::string format_trial_report(const TrialReport& r);
std::string trial_report_json(const TrialReport& r);

struct ReproduceRow {
  std::string pair;
  Model model = Model::Lu;
  Verdict expected = Verdict::Indistinguishable;
  Verdict observed = Verdict::Indistinguishable;
  double max_gap = 0.0;
  std::optional<Verdict> refinement;  // for models with a refinement counterpart
  bool ok = false;
};

struct ReproduceReport {
  TrialConfig config;
  std::vector<ReproduceRow> rows;

  bool all_ok() const;
};

/// Every corpus pair under every model with a declared verdict. A row passes
/// when the observed verdict matches, indistinguishable gaps stay below
/// kIndistinguishableGap, and the refinement verdict (if any) agrees.
ReproduceReport reproduce_all(const TrialConfig& config = {});

std::string format_reproduce(const ReproduceReport& r);
std::string reproduce_json(const ReproduceReport& r);

}  // namespace gnnl
