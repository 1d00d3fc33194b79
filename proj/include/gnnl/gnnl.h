#ifndef GNNL_GNNL_H
#define GNNL_GNNL_H

/* C interface to the gnnl library. Handles are opaque; every fallible call
 * returns a gnnl_status and leaves a message in gnnl_last_error() (per
 * thread). Strings returned through char** are owned by the caller and
 * released with gnnl_string_free. Output pointers marked "nullable" may be
 * NULL when the caller does not need that output. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GNNL_BUILDING)
#    define GNNL_API __declspec(dllexport)
#  else
#    define GNNL_API __declspec(dllimport)
#  endif
#else
#  define GNNL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gnnl_status {
  GNNL_OK = 0,
  GNNL_ERR_INVALID_ARGUMENT = 1,
  GNNL_ERR_IO = 2,
  GNNL_ERR_PARSE = 3,
  GNNL_ERR_PORTS = 4,
  GNNL_ERR_MISSING_LAYER = 5,
  GNNL_ERR_DIMENSION = 6,
  GNNL_ERR_SIZE_LIMIT = 7,
  GNNL_ERR_UNKNOWN_NAME = 8,
  GNNL_ERR_INTERNAL = 9
} gnnl_status;

typedef enum gnnl_model {
  GNNL_MODEL_LU = 0,
  GNNL_MODEL_CPN = 1,
  GNNL_MODEL_DIME = 2,
  GNNL_MODEL_DIME_PORTS = 3,
  GNNL_MODEL_HDCPN = 4
} gnnl_model;

typedef enum gnnl_readout {
  GNNL_READOUT_SUM = 0,
  GNNL_READOUT_MEAN = 1,
  GNNL_READOUT_MAX = 2
} gnnl_readout;

typedef enum gnnl_view {
  GNNL_VIEW_PORTS = 0,   /* port-ordered neighborhoods */
  GNNL_VIEW_MULTISET = 1 /* unordered neighborhoods, ports ignored */
} gnnl_view;

typedef struct gnnl_graph gnnl_graph;
typedef struct gnnl_pair gnnl_pair;

GNNL_API const char* gnnl_version(void);
GNNL_API const char* gnnl_status_string(gnnl_status status);
/* Message of the last failed call on this thread; "" after a success. */
GNNL_API const char* gnnl_last_error(void);
GNNL_API void gnnl_string_free(char* s);

/* ---- graphs ---- */

GNNL_API gnnl_status gnnl_graph_load(const char* path, gnnl_graph** out);
GNNL_API gnnl_status gnnl_graph_parse(const char* text, gnnl_graph** out);
GNNL_API void gnnl_graph_free(gnnl_graph* g);
GNNL_API gnnl_status gnnl_graph_save(const gnnl_graph* g, const char* path);
GNNL_API gnnl_status gnnl_graph_serialize(const gnnl_graph* g, char** out);
GNNL_API gnnl_status gnnl_graph_dot(const gnnl_graph* g, char** out);
GNNL_API size_t gnnl_graph_node_count(const gnnl_graph* g);
GNNL_API size_t gnnl_graph_edge_count(const gnnl_graph* g);
GNNL_API int gnnl_graph_has_ports(const gnnl_graph* g);
GNNL_API int gnnl_graph_has_positions(const gnnl_graph* g);
/* Number of violations plus a one-per-line description (nullable). */
GNNL_API gnnl_status gnnl_graph_validate_ports(const gnnl_graph* g, size_t* violations,
                                               char** report);
/* Copy of g with a seed-deterministic consistent port numbering. */
GNNL_API gnnl_status gnnl_graph_generate_ports(const gnnl_graph* g, uint64_t seed,
                                               gnnl_graph** out);

/* ---- properties ---- */

/* Infinite values are reported as -1. */
typedef struct gnnl_properties {
  int64_t girth;
  int64_t circumference;
  int64_t diameter;
  int64_t radius;
  int64_t cycle_count;
  int has_conjoint_cycle;
  int64_t max_clique;
} gnnl_properties;

GNNL_API gnnl_status gnnl_graph_properties(const gnnl_graph* g, gnnl_properties* out);
/* "key value" lines, or JSON when as_json is nonzero. */
GNNL_API gnnl_status gnnl_graph_properties_report(const gnnl_graph* g, int as_json, char** out);

/* ---- indistinguishability ---- */

/* report (nullable): verdict line, then the witness and its verification
 * when the graphs are indistinguishable and of equal size. */
GNNL_API gnnl_status gnnl_isocheck(const gnnl_graph* a, const gnnl_graph* b, gnnl_view view,
                                   int* indistinguishable, char** report);

/* ---- engines ---- */

GNNL_API gnnl_status gnnl_parse_model(const char* name, gnnl_model* out);
GNNL_API gnnl_status gnnl_parse_readout(const char* name, gnnl_readout* out);

/* Draws parameters from `seed` (uniform entries, norms capped at 1), runs the
 * model and writes the dim-vector readout and f(G). readout_out (nullable)
 * must hold dim doubles. */
GNNL_API gnnl_status gnnl_embed(const gnnl_graph* g, gnnl_model model, size_t layers, size_t dim,
                                uint64_t seed, gnnl_readout readout, double* readout_out,
                                double* f_out);

/* ---- computation trees ---- */

/* One line per distinct depth-L tree: weight, count and canonical key. */
GNNL_API gnnl_status gnnl_tree_distribution(const gnnl_graph* g, size_t depth, int as_json,
                                            char** out);

/* ---- corpus ---- */

GNNL_API size_t gnnl_corpus_count(void);
/* Canonical name of entry i, or NULL when out of range. Static storage. */
GNNL_API const char* gnnl_corpus_name(size_t i);
GNNL_API gnnl_status gnnl_corpus_list(char** out);
GNNL_API gnnl_status gnnl_pair_build(const char* name, size_t dim, gnnl_pair** out);
/* A pair of arbitrary graphs; it carries no expected verdicts. */
GNNL_API gnnl_status gnnl_pair_from_graphs(const gnnl_graph* a, const gnnl_graph* b,
                                           const char* label, gnnl_pair** out);
GNNL_API void gnnl_pair_free(gnnl_pair* p);
/* which = 0 for graph a, 1 for graph b; the result is an independent copy. */
GNNL_API gnnl_status gnnl_pair_graph(const gnnl_pair* p, int which, gnnl_graph** out);
/* has_expectation is 0 when the pair declares no verdict for the model. */
GNNL_API gnnl_status gnnl_pair_expected_verdict(const gnnl_pair* p, gnnl_model model,
                                                int* has_expectation, int* distinguishable);
GNNL_API gnnl_status gnnl_pair_manifest(const gnnl_pair* p, char** out);
/* Writes both graphs and the manifest; paths (nullable) lists them one per line. */
GNNL_API gnnl_status gnnl_pair_emit(const gnnl_pair* p, const char* dir, char** paths);

/* ---- distinguishability trials ---- */

typedef struct gnnl_trial_config {
  size_t trials;
  uint64_t seed;
  size_t dim;
  size_t layers;
  double tol;
  double cap;
  gnnl_readout readout;
} gnnl_trial_config;

/* 200 trials, seed 0, dim 8, 3 layers, tol 1e-6, cap 1, sum readout. */
GNNL_API void gnnl_trial_config_default(gnnl_trial_config* c);

GNNL_API gnnl_status gnnl_distinguish(const gnnl_pair* p, gnnl_model model,
                                      const gnnl_trial_config* c, int* distinguishable,
                                      double* max_gap, char** text, char** json);
GNNL_API gnnl_status gnnl_refinement_verdict(const gnnl_pair* p, int with_ports,
                                             int* distinguishable);
/* Every corpus pair under every model with a declared verdict. */
GNNL_API gnnl_status gnnl_reproduce_all(const gnnl_trial_config* c, int* all_ok, char** text,
                                        char** json);

/* ---- bounds ---- */

typedef struct gnnl_bound_spec {
  double c_phi, c_rho, c_g, b, b_x, b_1, b_2, b_beta;
  int64_t r, d, layers, m;
  double gamma, delta, epsilon, empirical_risk;
  int64_t vc_nodes;
} gnnl_bound_spec;

typedef struct gnnl_bound_values {
  double percolation, cd, m_value, r_bar, z, q;
  int q_valid;
  double bound, confidence, population, covering;
} gnnl_bound_values;

GNNL_API void gnnl_bound_spec_default(gnnl_bound_spec* s);
GNNL_API gnnl_status gnnl_bound_spec_parse(const char* text, gnnl_bound_spec* out);
GNNL_API gnnl_status gnnl_bound_spec_load(const char* path, gnnl_bound_spec* out);
GNNL_API gnnl_status gnnl_bounds_compute(const gnnl_bound_spec* s, gnnl_bound_values* values,
                                         char** text, char** json);
GNNL_API gnnl_status gnnl_bounds_regime_table(const gnnl_bound_spec* s, char** text);

typedef struct gnnl_perturbation_config {
  size_t trials;
  uint64_t seed;
  int64_t d, layers, r;
  double cap;
} gnnl_perturbation_config;

/* 1000 trials, seed 0, d 3, 3 layers, r 8, cap 1. */
GNNL_API void gnnl_perturbation_config_default(gnnl_perturbation_config* c);
GNNL_API gnnl_status gnnl_bounds_verify(const gnnl_perturbation_config* c, int* passed,
                                        char** text);

/* ---- exact port aggregation ---- */

/* alphabet_bound 0 selects the default N. */
GNNL_API gnnl_status gnnl_portagg_selftest(uint64_t alphabet, int ports, uint64_t alphabet_bound,
                                           size_t* sequences, size_t* distinct_codes,
                                           int* passed, char** text);

#ifdef __cplusplus
}
#endif

#endif /* GNNL_GNNL_H */
