#include "gnnl/distinguish.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "gnnl/isomorphism.hpp"
#include "json.hpp"

namespace gnnl {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

double inf_gap(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

double pick(const TrialGap& g, Readout r) {
  switch (r) {
    case Readout::Sum: return g.sum;
    case Readout::Mean: return g.mean;
    case Readout::Max: return g.max;
  }
  return g.sum;
}

nlohmann::ordered_json config_json(const TrialConfig& c) {
  return {{"trials", c.trials}, {"seed", c.seed},  {"dim", c.dim},
          {"layers", c.layers}, {"tol", c.tol},    {"cap", c.cap},
          {"readout", to_string(c.readout)}};
}

}  // namespace

TrialReport run_trials(const Graph& a, const Graph& b, Model model, const TrialConfig& config,
                       const std::string& label) {
  if (config.trials == 0) throw Error("at least one trial is required");
  TrialReport r;
  r.label = label;
  r.model = model;
  r.config = config;
  for (std::size_t t = 0; t < config.trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    const GnnParams p = random_params(config.dim, config.layers, rng, config.cap);
    const EmbeddingTable ha = forward(model, a, p);
    const EmbeddingTable hb = forward(model, b, p);
    TrialGap gap;
    gap.sum = inf_gap(readout(ha, Readout::Sum), readout(hb, Readout::Sum));
    gap.mean = inf_gap(readout(ha, Readout::Mean), readout(hb, Readout::Mean));
    gap.max = inf_gap(readout(ha, Readout::Max), readout(hb, Readout::Max));
    gap.f = std::abs(classify_embeddings(ha, p) - classify_embeddings(hb, p));
    r.max_gap.sum = std::max(r.max_gap.sum, gap.sum);
    r.max_gap.mean = std::max(r.max_gap.mean, gap.mean);
    r.max_gap.max = std::max(r.max_gap.max, gap.max);
    r.max_gap.f = std::max(r.max_gap.f, gap.f);
    const double decisive = std::max(pick(gap, config.readout), gap.f);
    if (decisive > config.tol && !r.separating_trial) r.separating_trial = t;
    r.decisive_gap = std::max(r.decisive_gap, decisive);
    r.gaps.push_back(gap);
  }
  r.verdict = r.decisive_gap > config.tol ? Verdict::Distinguishable : Verdict::Indistinguishable;
  return r;
}

Verdict refinement_verdict(const Graph& a, const Graph& b, bool with_ports) {
  const bool same = with_ports ? are_port_locally_isomorphic(a, b).indistinguishable
                               : are_lu_indistinguishable(a, b);
  return same ? Verdict::Indistinguishable : Verdict::Distinguishable;
}

std::string format_trial_report(const TrialReport& r) {
  std::ostringstream out;
  out << "pair " << r.label << "\n"
      << "model " << to_string(r.model) << "\n"
      << "trials " << r.config.trials << "\n"
      << "seed " << r.config.seed << "\n"
      << "dim " << r.config.dim << "\n"
      << "layers " << r.config.layers << "\n"
      << "tol " << sci(r.config.tol) << "\n"
      << "readout " << to_string(r.config.readout) << "\n"
      << "max_gap_sum " << sci(r.max_gap.sum) << "\n"
      << "max_gap_mean " << sci(r.max_gap.mean) << "\n"
      << "max_gap_max " << sci(r.max_gap.max) << "\n"
      << "max_gap_f " << sci(r.max_gap.f) << "\n"
      << "decisive_gap " << sci(r.decisive_gap) << "\n"
      << "separating_trial "
      << (r.separating_trial ? std::to_string(*r.separating_trial) : std::string("none")) << "\n"
      << "verdict " << to_string(r.verdict) << "\n";
  return out.str();
}

std::string trial_report_json(const TrialReport& r) {
  nlohmann::ordered_json j;
  j["pair"] = r.label;
  j["model"] = to_string(r.model);
  j["config"] = config_json(r.config);
  j["max_gap"] = {{"sum", r.max_gap.sum}, {"mean", r.max_gap.mean}, {"max", r.max_gap.max},
                  {"f", r.max_gap.f}};
  j["decisive_gap"] = r.decisive_gap;
  j["separating_trial"] =
      r.separating_trial ? nlohmann::ordered_json(*r.separating_trial) : nlohmann::ordered_json();
  j["verdict"] = to_string(r.verdict);
  nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
  for (const auto& g : r.gaps) gaps.push_back({g.sum, g.mean, g.max, g.f});
  j["trial_gaps"] = gaps;  // [sum, mean, max, f] per trial
  return j.dump(2) + "\n";
}

bool ReproduceReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok; });
}

ReproduceReport reproduce_all(const TrialConfig& config) {
  ReproduceReport report;
  report.config = config;
  for (const auto& entry : corpus_list()) {
    const ConstructionPair pair = build_pair(entry.name, config.dim);
    for (const auto& expected : pair.verdicts) {
      ReproduceRow row;
      row.pair = pair.name;
      row.model = expected.model;
      row.expected = expected.verdict;
      const TrialReport t = run_trials(pair.a, pair.b, expected.model, config, pair.name);
      row.observed = t.verdict;
      row.max_gap = t.decisive_gap;
      if (expected.model == Model::Lu) row.refinement = refinement_verdict(pair.a, pair.b, false);
      if (expected.model == Model::Cpn) row.refinement = refinement_verdict(pair.a, pair.b, true);
      row.ok = row.observed == row.expected &&
               (row.expected == Verdict::Distinguishable || row.max_gap < kIndistinguishableGap) &&
               (!row.refinement || *row.refinement == row.expected);
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string format_reproduce(const ReproduceReport& r) {
  std::ostringstream out;
  out << "trials " << r.config.trials << "  seed " << r.config.seed << "  dim " << r.config.dim
      << "  layers " << r.config.layers << "  tol " << sci(r.config.tol) << "  readout "
      << to_string(r.config.readout) << "\n";
  for (const auto& row : r.rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-26s %-11s expected %-17s observed %-17s gap %s",
                  row.ok ? "ok" : "FAIL", row.pair.c_str(), to_string(row.model).c_str(),
                  to_string(row.expected).c_str(), to_string(row.observed).c_str(),
                  sci(row.max_gap).c_str());
    out << line;
    if (row.refinement) out << "  refinement " << to_string(*row.refinement);
    out << "\n";
  }
  out << (r.all_ok() ? "all verdicts reproduced" : "verdict mismatch") << "\n";
  return out.str();
}

std::string reproduce_json(const ReproduceReport& r) {
  nlohmann::ordered_json j;
  j["config"] = config_json(r.config);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o{{"pair", row.pair},
                             {"model", to_string(row.model)},
                             {"expected", to_string(row.expected)},
                             {"observed", to_string(row.observed)},
                             {"max_gap", row.max_gap}};
    o["refinement"] = row.refinement ? nlohmann::ordered_json(to_string(*row.refinement))
                                     : nlohmann::ordered_json();
    o["ok"] = row.ok;
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["all_ok"] = r.all_ok();
  return j.dump(2) + "\n";
}

}  // namespace gnnl
