#include "gnnl/gnnl.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <random>
#include <sstream>

#include "gnnl/bounds.hpp"
#include "gnnl/corpus.hpp"
#include "gnnl/distinguish.hpp"
#include "gnnl/engines.hpp"
#include "gnnl/graph.hpp"
#include "gnnl/graph_io.hpp"
#include "gnnl/isomorphism.hpp"
#include "gnnl/port_agg.hpp"
#include "gnnl/properties.hpp"
#include "gnnl/trees.hpp"
#include "json.hpp"

struct gnnl_graph {
  gnnl::Graph g;
};

struct gnnl_pair {
  gnnl::ConstructionPair p;
};

namespace {

thread_local std::string last_error;

gnnl_status fail(gnnl_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

/// Runs `body`, translating exceptions into status codes.
template <typename F>
gnnl_status guard(F&& body) {
  try {
    last_error.clear();
    body();
    return GNNL_OK;
  } catch (const gnnl::ParseError& e) {
    return fail(GNNL_ERR_PARSE, e.what());
  } catch (const gnnl::PortError& e) {
    return fail(GNNL_ERR_PORTS, e.what());
  } catch (const gnnl::MissingLayerError& e) {
    return fail(GNNL_ERR_MISSING_LAYER, e.what());
  } catch (const gnnl::DimensionError& e) {
    return fail(GNNL_ERR_DIMENSION, e.what());
  } catch (const gnnl::SizeLimitError& e) {
    return fail(GNNL_ERR_SIZE_LIMIT, e.what());
  } catch (const gnnl::IoError& e) {
    return fail(GNNL_ERR_IO, e.what());
  } catch (const gnnl::UnknownNameError& e) {
    return fail(GNNL_ERR_UNKNOWN_NAME, e.what());
  } catch (const gnnl::Error& e) {
    return fail(GNNL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GNNL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GNNL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GNNL_ERR_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) throw gnnl::Error(std::string(what) + " must not be NULL");
}

gnnl::Model to_model(gnnl_model m) {
  switch (m) {
    case GNNL_MODEL_LU: return gnnl::Model::Lu;
    case GNNL_MODEL_CPN: return gnnl::Model::Cpn;
    case GNNL_MODEL_DIME: return gnnl::Model::Dime;
    case GNNL_MODEL_DIME_PORTS: return gnnl::Model::DimePorts;
    case GNNL_MODEL_HDCPN: return gnnl::Model::Hdcpn;
  }
  throw gnnl::Error("unknown model code");
}

gnnl::Readout to_readout(gnnl_readout r) {
  switch (r) {
    case GNNL_READOUT_SUM: return gnnl::Readout::Sum;
    case GNNL_READOUT_MEAN: return gnnl::Readout::Mean;
    case GNNL_READOUT_MAX: return gnnl::Readout::Max;
  }
  throw gnnl::Error("unknown readout code");
}

gnnl::TrialConfig to_config(const gnnl_trial_config* c) {
  gnnl::TrialConfig out;
  if (!c) return out;
  out.trials = c->trials;
  out.seed = c->seed;
  out.dim = c->dim;
  out.layers = c->layers;
  out.tol = c->tol;
  out.cap = c->cap;
  out.readout = to_readout(c->readout);
  return out;
}

gnnl::BoundSpec to_spec(const gnnl_bound_spec* s) {
  gnnl::BoundSpec o;
  o.c_phi = s->c_phi;
  o.c_rho = s->c_rho;
  o.c_g = s->c_g;
  o.b = s->b;
  o.b_x = s->b_x;
  o.b_1 = s->b_1;
  o.b_2 = s->b_2;
  o.b_beta = s->b_beta;
  o.r = s->r;
  o.d = s->d;
  o.layers = s->layers;
  o.m = s->m;
  o.gamma = s->gamma;
  o.delta = s->delta;
  o.epsilon = s->epsilon;
  o.empirical_risk = s->empirical_risk;
  o.vc_nodes = s->vc_nodes;
  return o;
}

void from_spec(const gnnl::BoundSpec& o, gnnl_bound_spec* s) {
  s->c_phi = o.c_phi;
  s->c_rho = o.c_rho;
  s->c_g = o.c_g;
  s->b = o.b;
  s->b_x = o.b_x;
  s->b_1 = o.b_1;
  s->b_2 = o.b_2;
  s->b_beta = o.b_beta;
  s->r = o.r;
  s->d = o.d;
  s->layers = o.layers;
  s->m = o.m;
  s->gamma = o.gamma;
  s->delta = o.delta;
  s->epsilon = o.epsilon;
  s->empirical_risk = o.empirical_risk;
  s->vc_nodes = o.vc_nodes;
}

int64_t ext(const gnnl::Extended& e) { return e.finite() ? e.value() : -1; }

}  // namespace

extern "C" {

const char* gnnl_version(void) { return "0.1.0"; }

const char* gnnl_status_string(gnnl_status status) {
  switch (status) {
    case GNNL_OK: return "ok";
    case GNNL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GNNL_ERR_IO: return "i/o error";
    case GNNL_ERR_PARSE: return "parse error";
    case GNNL_ERR_PORTS: return "inconsistent ports";
    case GNNL_ERR_MISSING_LAYER: return "missing graph layer";
    case GNNL_ERR_DIMENSION: return "dimension mismatch";
    case GNNL_ERR_SIZE_LIMIT: return "size limit exceeded";
    case GNNL_ERR_UNKNOWN_NAME: return "unknown name";
    case GNNL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* gnnl_last_error(void) { return last_error.c_str(); }

void gnnl_string_free(char* s) { std::free(s); }

gnnl_status gnnl_graph_load(const char* path, gnnl_graph** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gnnl_graph{gnnl::load_graph(path)};
  });
}

gnnl_status gnnl_graph_parse(const char* text, gnnl_graph** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = new gnnl_graph{gnnl::parse_graph(text)};
  });
}

void gnnl_graph_free(gnnl_graph* g) { delete g; }

gnnl_status gnnl_graph_save(const gnnl_graph* g, const char* path) {
  return guard([&] {
    require(g, "graph");
    require(path, "path");
    gnnl::save_graph(g->g, path);
  });
}

gnnl_status gnnl_graph_serialize(const gnnl_graph* g, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    put(out, gnnl::serialize_graph(g->g));
  });
}

gnnl_status gnnl_graph_dot(const gnnl_graph* g, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    put(out, gnnl::to_dot(g->g));
  });
}

size_t gnnl_graph_node_count(const gnnl_graph* g) { return g ? g->g.node_count() : 0; }
size_t gnnl_graph_edge_count(const gnnl_graph* g) { return g ? g->g.edge_count() : 0; }
int gnnl_graph_has_ports(const gnnl_graph* g) { return g && g->g.has_ports() ? 1 : 0; }
int gnnl_graph_has_positions(const gnnl_graph* g) { return g && g->g.has_positions() ? 1 : 0; }

gnnl_status gnnl_graph_validate_ports(const gnnl_graph* g, size_t* violations, char** report) {
  return guard([&] {
    require(g, "graph");
    const auto found = gnnl::validate_ports(g->g);
    if (violations) *violations = found.size();
    std::ostringstream text;
    for (const auto& v : found) {
      text << "(" << g->g.name(v.node) << ", " << v.port << "): " << v.message << "\n";
    }
    put(report, text.str());
  });
}

gnnl_status gnnl_graph_generate_ports(const gnnl_graph* g, uint64_t seed, gnnl_graph** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    *out = new gnnl_graph{g->g.with_ports(gnnl::generate_consistent_ports(g->g, seed))};
  });
}

gnnl_status gnnl_graph_properties(const gnnl_graph* g, gnnl_properties* out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    const auto r = gnnl::compute_properties(g->g);
    out->girth = ext(r.girth);
    out->circumference = ext(r.circumference);
    out->diameter = ext(r.diameter);
    out->radius = ext(r.radius);
    out->cycle_count = r.cycle_count;
    out->has_conjoint_cycle = r.has_conjoint_cycle ? 1 : 0;
    out->max_clique = r.max_clique;
  });
}

gnnl_status gnnl_graph_properties_report(const gnnl_graph* g, int as_json, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    const auto r = gnnl::compute_properties(g->g);
    put(out, as_json ? gnnl::properties_json(r) : gnnl::format_properties(r));
  });
}

gnnl_status gnnl_isocheck(const gnnl_graph* a, const gnnl_graph* b, gnnl_view view,
                          int* indistinguishable, char** report) {
  return guard([&] {
    require(a, "graph a");
    require(b, "graph b");
    const auto result = view == GNNL_VIEW_PORTS
                            ? gnnl::are_port_locally_isomorphic(a->g, b->g)
                            : gnnl::lu_indistinguishability(a->g, b->g);
    if (indistinguishable) *indistinguishable = result.indistinguishable ? 1 : 0;
    if (!report) return;
    std::ostringstream text;
    text << "view " << (view == GNNL_VIEW_PORTS ? "ports" : "multiset") << "\n"
         << "verdict " << (result.indistinguishable ? "indistinguishable" : "distinguishable")
         << "\n";
    if (result.witness) {
      const auto problems = gnnl::verify_witness(a->g, b->g, *result.witness);
      text << "witness\n" << gnnl::format_witness(a->g, b->g, *result.witness);
      text << "witness_check " << (problems.empty() ? "verified" : "FAILED") << "\n";
      for (const auto& p : problems) text << "  " << p << "\n";
    }
    put(report, text.str());
  });
}

gnnl_status gnnl_parse_model(const char* name, gnnl_model* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    switch (gnnl::parse_model(name)) {
      case gnnl::Model::Lu: *out = GNNL_MODEL_LU; break;
      case gnnl::Model::Cpn: *out = GNNL_MODEL_CPN; break;
      case gnnl::Model::Dime: *out = GNNL_MODEL_DIME; break;
      case gnnl::Model::DimePorts: *out = GNNL_MODEL_DIME_PORTS; break;
      case gnnl::Model::Hdcpn: *out = GNNL_MODEL_HDCPN; break;
    }
  });
}

gnnl_status gnnl_parse_readout(const char* name, gnnl_readout* out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    switch (gnnl::parse_readout(name)) {
      case gnnl::Readout::Sum: *out = GNNL_READOUT_SUM; break;
      case gnnl::Readout::Mean: *out = GNNL_READOUT_MEAN; break;
      case gnnl::Readout::Max: *out = GNNL_READOUT_MAX; break;
    }
  });
}

gnnl_status gnnl_embed(const gnnl_graph* g, gnnl_model model, size_t layers, size_t dim,
                       uint64_t seed, gnnl_readout readout, double* readout_out, double* f_out) {
  return guard([&] {
    require(g, "graph");
    if (dim == 0) throw gnnl::DimensionError("dim must be positive");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      std::uint32_t{0}};
    std::mt19937_64 rng(seq);
    const auto p = gnnl::random_params(dim, layers, rng);
    const auto tbl = gnnl::forward(to_model(model), g->g, p);
    const gnnl::Vector v = gnnl::readout(tbl, to_readout(readout));
    if (readout_out) {
      for (size_t i = 0; i < dim; ++i) readout_out[i] = v(static_cast<Eigen::Index>(i));
    }
    if (f_out) *f_out = gnnl::classify_embeddings(tbl, p);
  });
}

gnnl_status gnnl_tree_distribution(const gnnl_graph* g, size_t depth, int as_json, char** out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    const auto dist = gnnl::tree_distribution(g->g, depth);
    if (as_json) {
      nlohmann::ordered_json j;
      j["depth"] = dist.depth;
      j["node_count"] = dist.node_count;
      nlohmann::ordered_json entries = nlohmann::ordered_json::array();
      for (const auto& e : dist.entries) {
        entries.push_back({{"weight", e.weight},
                           {"count", e.count},
                           {"root", g->g.name(e.representative.source)},
                           {"size", e.representative.size()},
                           {"key", e.key}});
      }
      j["trees"] = entries;
      put(out, j.dump(2) + "\n");
      return;
    }
    std::ostringstream text;
    text << "depth " << dist.depth << "\nnodes " << dist.node_count << "\ndistinct "
         << dist.entries.size() << "\n";
    for (const auto& e : dist.entries) {
      text << e.count << "/" << dist.node_count << "  root " << g->g.name(e.representative.source)
           << "  size " << e.representative.size() << "  " << e.key << "\n";
    }
    put(out, text.str());
  });
}

size_t gnnl_corpus_count(void) { return gnnl::corpus_list().size(); }

const char* gnnl_corpus_name(size_t i) {
  const auto& list = gnnl::corpus_list();
  return i < list.size() ? list[i].name.c_str() : nullptr;
}

gnnl_status gnnl_corpus_list(char** out) {
  return guard([&] {
    require(out, "out");
    std::ostringstream text;
    for (const auto& e : gnnl::corpus_list()) {
      text << e.name;
      for (const auto& a : e.aliases) text << (a == e.aliases.front() ? "  (" : ", ") << a;
      if (!e.aliases.empty()) text << ")";
      text << "  " << e.provenance << "\n";
    }
    put(out, text.str());
  });
}

gnnl_status gnnl_pair_build(const char* name, size_t dim, gnnl_pair** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = new gnnl_pair{gnnl::build_pair(name, dim)};
  });
}

gnnl_status gnnl_pair_from_graphs(const gnnl_graph* a, const gnnl_graph* b, const char* label,
                                  gnnl_pair** out) {
  return guard([&] {
    require(a, "graph a");
    require(b, "graph b");
    require(out, "out");
    gnnl::ConstructionPair p;
    p.name = label ? label : "pair";
    p.a = a->g;
    p.b = b->g;
    *out = new gnnl_pair{std::move(p)};
  });
}

void gnnl_pair_free(gnnl_pair* p) { delete p; }

gnnl_status gnnl_pair_graph(const gnnl_pair* p, int which, gnnl_graph** out) {
  return guard([&] {
    require(p, "pair");
    require(out, "out");
    if (which != 0 && which != 1) throw gnnl::Error("which must be 0 or 1");
    *out = new gnnl_graph{which == 0 ? p->p.a : p->p.b};
  });
}

gnnl_status gnnl_pair_expected_verdict(const gnnl_pair* p, gnnl_model model, int* has_expectation,
                                       int* distinguishable) {
  return guard([&] {
    require(p, "pair");
    require(has_expectation, "has_expectation");
    const gnnl::Model m = to_model(model);
    *has_expectation = 0;
    for (const auto& v : p->p.verdicts) {
      if (v.model != m) continue;
      *has_expectation = 1;
      if (distinguishable) *distinguishable = v.verdict == gnnl::Verdict::Distinguishable ? 1 : 0;
    }
  });
}

gnnl_status gnnl_pair_manifest(const gnnl_pair* p, char** out) {
  return guard([&] {
    require(p, "pair");
    require(out, "out");
    put(out, gnnl::manifest_json(p->p));
  });
}

gnnl_status gnnl_pair_emit(const gnnl_pair* p, const char* dir, char** paths) {
  return guard([&] {
    require(p, "pair");
    require(dir, "dir");
    std::ostringstream text;
    for (const auto& path : gnnl::emit_pair(p->p, dir)) text << path.string() << "\n";
    put(paths, text.str());
  });
}

void gnnl_trial_config_default(gnnl_trial_config* c) {
  if (!c) return;
  const gnnl::TrialConfig d;
  c->trials = d.trials;
  c->seed = d.seed;
  c->dim = d.dim;
  c->layers = d.layers;
  c->tol = d.tol;
  c->cap = d.cap;
  c->readout = GNNL_READOUT_SUM;
}

gnnl_status gnnl_distinguish(const gnnl_pair* p, gnnl_model model, const gnnl_trial_config* c,
                             int* distinguishable, double* max_gap, char** text, char** json) {
  return guard([&] {
    require(p, "pair");
    const auto r = gnnl::run_trials(p->p.a, p->p.b, to_model(model), to_config(c), p->p.name);
    if (distinguishable) *distinguishable = r.verdict == gnnl::Verdict::Distinguishable ? 1 : 0;
    if (max_gap) *max_gap = r.decisive_gap;
    put(text, gnnl::format_trial_report(r));
    put(json, gnnl::trial_report_json(r));
  });
}

gnnl_status gnnl_refinement_verdict(const gnnl_pair* p, int with_ports, int* distinguishable) {
  return guard([&] {
    require(p, "pair");
    require(distinguishable, "distinguishable");
    *distinguishable =
        gnnl::refinement_verdict(p->p.a, p->p.b, with_ports != 0) == gnnl::Verdict::Distinguishable;
  });
}

gnnl_status gnnl_reproduce_all(const gnnl_trial_config* c, int* all_ok, char** text,
                               char** json) {
  return guard([&] {
    const auto r = gnnl::reproduce_all(to_config(c));
    if (all_ok) *all_ok = r.all_ok() ? 1 : 0;
    put(text, gnnl::format_reproduce(r));
    put(json, gnnl::reproduce_json(r));
  });
}

void gnnl_bound_spec_default(gnnl_bound_spec* s) {
  if (s) from_spec(gnnl::BoundSpec{}, s);
}

gnnl_status gnnl_bound_spec_parse(const char* text, gnnl_bound_spec* out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    from_spec(gnnl::parse_bound_spec(text), out);
  });
}

gnnl_status gnnl_bound_spec_load(const char* path, gnnl_bound_spec* out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    from_spec(gnnl::parse_bound_spec(gnnl::read_file(path)), out);
  });
}

gnnl_status gnnl_bounds_compute(const gnnl_bound_spec* s, gnnl_bound_values* values, char** text,
                                char** json) {
  return guard([&] {
    require(s, "spec");
    const auto r = gnnl::compute_bound_report(to_spec(s));
    if (values) {
      values->percolation = r.percolation;
      values->cd = r.cd;
      values->m_value = r.m_value;
      values->r_bar = r.r_bar;
      values->z = r.z;
      values->q = r.q.q;
      values->q_valid = r.q.q_valid ? 1 : 0;
      values->bound = r.q.bound;
      values->confidence = r.confidence;
      values->population = r.population;
      values->covering = r.covering;
    }
    put(text, gnnl::format_bound_report(r));
    put(json, gnnl::bound_report_json(r));
  });
}

gnnl_status gnnl_bounds_regime_table(const gnnl_bound_spec* s, char** text) {
  return guard([&] {
    require(s, "spec");
    require(text, "text");
    const auto spec = to_spec(s);
    put(text, gnnl::format_regime_table(gnnl::regime_table(spec), spec));
  });
}

void gnnl_perturbation_config_default(gnnl_perturbation_config* c) {
  if (!c) return;
  const gnnl::PerturbationConfig d;
  c->trials = d.trials;
  c->seed = d.seed;
  c->d = d.d;
  c->layers = d.layers;
  c->r = d.r;
  c->cap = d.cap;
}

gnnl_status gnnl_bounds_verify(const gnnl_perturbation_config* c, int* passed, char** text) {
  return guard([&] {
    require(c, "config");
    gnnl::PerturbationConfig cfg;
    cfg.trials = c->trials;
    cfg.seed = c->seed;
    cfg.d = c->d;
    cfg.layers = c->layers;
    cfg.r = c->r;
    cfg.cap = c->cap;
    const auto r = gnnl::verify_perturbation_bounds(cfg);
    if (passed) *passed = r.passed() ? 1 : 0;
    put(text, gnnl::format_perturbation_report(r));
  });
}

gnnl_status gnnl_portagg_selftest(uint64_t alphabet, int ports, uint64_t alphabet_bound,
                                  size_t* sequences, size_t* distinct_codes, int* passed,
                                  char** text) {
  return guard([&] {
    const auto r = gnnl::port_agg_selftest(
        alphabet, ports,
        alphabet_bound ? std::optional<std::uint64_t>(alphabet_bound) : std::nullopt);
    if (sequences) *sequences = r.sequences;
    if (distinct_codes) *distinct_codes = r.distinct_codes;
    if (passed) *passed = r.passed() ? 1 : 0;
    put(text, gnnl::format_selftest(r));
  });
}

}  // extern "C"
