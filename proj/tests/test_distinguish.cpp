#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "gnnl/distinguish.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gnnl;

namespace {

double inf_norm_gap(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

}  // namespace

TEST_CASE("a trial's gap can be recomputed from its documented seed") {
  const ConstructionPair p = build_pair("fig1");
  TrialConfig cfg;
  cfg.trials = 6;
  cfg.seed = 0x0000000500000007ULL;
  const TrialReport r = run_trials(p.a, p.b, Model::Cpn, cfg);
  REQUIRE(r.gaps.size() == 6);
  for (std::uint32_t t : {0u, 3u, 5u}) {
    std::seed_seq seq{7u, 5u, t};
    std::mt19937_64 rng(seq);
    const GnnParams params = random_params(cfg.dim, cfg.layers, rng, cfg.cap);
    const auto ha = cpn_forward(p.a, params);
    const auto hb = cpn_forward(p.b, params);
    CHECK(r.gaps[t].sum == inf_norm_gap(readout(ha, Readout::Sum), readout(hb, Readout::Sum)));
    CHECK(r.gaps[t].max == inf_norm_gap(readout(ha, Readout::Max), readout(hb, Readout::Max)));
    CHECK(r.gaps[t].f == std::abs(classify_embeddings(ha, params) - classify_embeddings(hb, params)));
  }
}

TEST_CASE("reports are deterministic and summarize their trials") {
  const ConstructionPair p = build_pair("fig3_s4s8");
  TrialConfig cfg;
  cfg.trials = 25;
  const TrialReport r1 = run_trials(p.a, p.b, Model::Dime, cfg);
  const TrialReport r2 = run_trials(p.a, p.b, Model::Dime, cfg);
  CHECK(format_trial_report(r1) == format_trial_report(r2));
  double worst = 0.0;
  std::optional<std::size_t> first;
  for (std::size_t t = 0; t < r1.gaps.size(); ++t) {
    const double d = std::max(r1.gaps[t].sum, r1.gaps[t].f);
    worst = std::max(worst, d);
    if (d > cfg.tol && !first) first = t;
  }
  CHECK(r1.decisive_gap == worst);
  CHECK(r1.separating_trial == first);
  CHECK(r1.verdict == Verdict::Distinguishable);
  const auto j = nlohmann::json::parse(trial_report_json(r1));
  CHECK(j.at("verdict") == "distinguishable");
  CHECK(j.at("trial_gaps").size() == 25);
}

TEST_CASE("the selected readout decides the verdict") {
  const ConstructionPair p = build_pair("fig1");
  TrialConfig cfg;
  cfg.trials = 10;
  for (Readout mode : {Readout::Sum, Readout::Mean, Readout::Max}) {
    cfg.readout = mode;
    const TrialReport r = run_trials(p.a, p.b, Model::Lu, cfg);
    CHECK(r.verdict == Verdict::Indistinguishable);
    CHECK(r.decisive_gap == 0.0);
  }
}

TEST_CASE("models that read a missing layer refuse to run") {
  const ConstructionPair p = build_pair("fig3_conjoint");
  TrialConfig cfg;
  cfg.trials = 1;
  CHECK_THROWS_AS(run_trials(p.a, p.b, Model::Dime, cfg), MissingLayerError);
  CHECK_THROWS_AS(run_trials(p.a.without_ports(), p.b, Model::Cpn, cfg), MissingLayerError);
  cfg.trials = 0;
  CHECK_THROWS_AS(run_trials(p.a, p.b, Model::Lu, cfg), Error);
}

TEST_CASE("refinement verdicts follow the construction") {
  const ConstructionPair fig1 = build_pair("fig1");
  CHECK(refinement_verdict(fig1.a, fig1.b, false) == Verdict::Indistinguishable);
  CHECK(refinement_verdict(fig1.a, fig1.b, true) == Verdict::Distinguishable);
  const ConstructionPair fig2 = build_pair("fig2");
  CHECK(refinement_verdict(fig2.a, fig2.b, true) == Verdict::Indistinguishable);
}

TEST_CASE("refinement-indistinguishable random pairs never separate") {
  std::mt19937_64 rng(61);
  TrialConfig cfg;
  cfg.trials = 20;
  cfg.dim = 4;
  for (int t = 0; t < 10; ++t) {
    const Graph g = testing_support::random_graph(7, 0.4, rng, 4, false, true);
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = g.permuted(perm);
    CHECK(run_trials(g, h, Model::Lu, cfg).decisive_gap == 0.0);
    CHECK(run_trials(g, h, Model::Cpn, cfg).decisive_gap == 0.0);
  }
}

TEST_CASE("zero layers see only the readout of zero embeddings") {
  const ConstructionPair p = build_pair("fig1");
  TrialConfig cfg;
  cfg.trials = 5;
  cfg.layers = 0;
  CHECK(run_trials(p.a, p.b, Model::Cpn, cfg).verdict == Verdict::Indistinguishable);
}

TEST_CASE("every declared corpus verdict is reproduced") {
  TrialConfig cfg;
  cfg.trials = 40;
  const ReproduceReport r = reproduce_all(cfg);
  CHECK(r.rows.size() == 14);
  for (const auto& row : r.rows) {
    CAPTURE(row.pair);
    CAPTURE(to_string(row.model));
    CHECK(row.ok);
  }
  CHECK(r.all_ok());
  CHECK(format_reproduce(r).find("all verdicts reproduced") != std::string::npos);
  const auto j = nlohmann::json::parse(reproduce_json(r));
  CHECK(j.dump().find("fig4_cubes") != std::string::npos);
}
