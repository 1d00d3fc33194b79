// Command-line front end over the C interface.
// Exit codes: 0 success, 1 usage or I/O failure, 2 verdict mismatch or failed check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnnl/gnnl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;

struct Failure {
  int code;
  std::string message;
};

void check(gnnl_status s) {
  if (s != GNNL_OK) {
    throw Failure{kExitUsage, std::string(gnnl_status_string(s)) + ": " + gnnl_last_error()};
  }
}

/// Owns a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  gnnl_string_free(s);
  return out;
}

struct GraphDeleter {
  void operator()(gnnl_graph* g) const { gnnl_graph_free(g); }
};
struct PairDeleter {
  void operator()(gnnl_pair* p) const { gnnl_pair_free(p); }
};
using GraphPtr = std::unique_ptr<gnnl_graph, GraphDeleter>;
using PairPtr = std::unique_ptr<gnnl_pair, PairDeleter>;

GraphPtr load(const std::string& path) {
  gnnl_graph* g = nullptr;
  check(gnnl_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitUsage, "cannot write " + tmp};
    out << text;
    if (!out) throw Failure{kExitUsage, "write failed for " + tmp};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Failure{kExitUsage, "cannot move " + tmp + " to " + path + ": " + ec.message()};
}

/// Prints the report, or writes it to `out_path` when one is given.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_atomic(out_path, text);
  }
}

gnnl_model model_of(const std::string& name) {
  gnnl_model m;
  check(gnnl_parse_model(name.c_str(), &m));
  return m;
}

gnnl_readout readout_of(const std::string& name) {
  gnnl_readout r;
  check(gnnl_parse_readout(name.c_str(), &r));
  return r;
}

/// A corpus name, or two comma-separated graph files.
PairPtr load_pair(const std::string& spec, std::size_t dim) {
  gnnl_pair* p = nullptr;
  const auto comma = spec.find(',');
  if (comma == std::string::npos) {
    check(gnnl_pair_build(spec.c_str(), dim, &p));
    return PairPtr(p);
  }
  const GraphPtr a = load(spec.substr(0, comma));
  const GraphPtr b = load(spec.substr(comma + 1));
  check(gnnl_pair_from_graphs(a.get(), b.get(), spec.c_str(), &p));
  return PairPtr(p);
}

struct TrialOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::size_t dim = 8;
  std::size_t layers = 3;
  double tol = 1e-6;
  std::string readout = "sum";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--trials", trials, "Random parameter draws")->capture_default_str();
    cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
    cmd->add_option("--dim", dim, "Embedding dimension r")->capture_default_str();
    cmd->add_option("--layers", layers, "Layers L")->capture_default_str();
    cmd->add_option("--tol", tol, "Separation tolerance")->capture_default_str();
    cmd->add_option("--readout", readout, "sum|mean|max")->capture_default_str();
  }

  gnnl_trial_config config() const {
    gnnl_trial_config c;
    gnnl_trial_config_default(&c);
    c.trials = trials;
    c.seed = seed;
    c.dim = dim;
    c.layers = layers;
    c.tol = tol;
    c.readout = readout_of(readout);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expressivity counterexamples, GNN engines and generalization bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gnnl_version()));

  // corpus
  auto* corpus = app.add_subcommand("corpus", "List or emit the counterexample pairs");
  corpus->require_subcommand(1);
  auto* corpus_list = corpus->add_subcommand("list", "Names and what each pair transcribes");
  auto* corpus_emit = corpus->add_subcommand("emit", "Write both graphs and a manifest");
  std::string emit_name;
  std::string emit_dir;
  std::size_t emit_dim = 8;
  corpus_emit->add_option("name", emit_name, "Pair name or alias")->required();
  corpus_emit->add_option("--out", emit_dir, "Output directory")->required();
  corpus_emit->add_option("--dim", emit_dim, "Feature dimension")->capture_default_str();

  // props
  auto* props = app.add_subcommand("props", "Exact graph properties");
  std::string props_file;
  bool props_json = false;
  props->add_option("graph", props_file, "Graph file")->required();
  props->add_flag("--json", props_json, "Machine-readable output");

  // isocheck
  auto* iso = app.add_subcommand("isocheck", "Port-local isomorphism / refinement verdict");
  std::string iso_a;
  std::string iso_b;
  bool iso_ports = false;
  bool iso_no_ports = false;
  iso->add_option("g1", iso_a, "First graph file")->required();
  iso->add_option("g2", iso_b, "Second graph file")->required();
  auto* ports_flag = iso->add_flag("--ports", iso_ports, "Port-ordered neighborhoods");
  iso->add_flag("--no-ports", iso_no_ports, "Unordered neighborhoods")->excludes(ports_flag);

  // embed
  auto* embed = app.add_subcommand("embed", "Run one engine and print the readout");
  std::string embed_file;
  std::string embed_model = "lu";
  std::size_t embed_layers = 3;
  std::size_t embed_dim = 8;
  std::uint64_t embed_seed = 0;
  std::string embed_readout = "sum";
  embed->add_option("graph", embed_file, "Graph file")->required();
  embed->add_option("--model", embed_model, "lu|cpn|dime|dime+ports|hdcpn")->capture_default_str();
  embed->add_option("--layers", embed_layers, "Layers L")->capture_default_str();
  embed->add_option("--dim", embed_dim, "Embedding dimension r")->capture_default_str();
  embed->add_option("--seed", embed_seed, "Parameter seed")->capture_default_str();
  embed->add_option("--readout", embed_readout, "sum|mean|max")->capture_default_str();

  // distinguish
  auto* dist = app.add_subcommand("distinguish", "Randomized distinguishability trials");
  std::string dist_pair;
  std::string dist_model = "lu";
  bool dist_json = false;
  std::string dist_out;
  TrialOptions dist_opts;
  dist->add_option("--pair", dist_pair, "Corpus name or fileA,fileB")->required();
  dist->add_option("--model", dist_model, "lu|cpn|dime|dime+ports|hdcpn")->capture_default_str();
  dist_opts.add_to(dist);
  dist->add_flag("--json", dist_json, "Machine-readable output");
  dist->add_option("--out", dist_out, "Write the report to a file");

  // trees
  auto* trees = app.add_subcommand("trees", "Computation-tree distribution");
  std::string trees_file;
  std::size_t trees_depth = 2;
  bool trees_json = false;
  trees->add_option("graph", trees_file, "Graph file")->required();
  trees->add_option("--depth", trees_depth, "Unrolling depth L")->capture_default_str();
  trees->add_flag("--json", trees_json, "Machine-readable output");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Generalization bound calculator");
  std::string bounds_spec;
  bool bounds_json = false;
  bool bounds_regimes = false;
  bounds->add_option("--spec", bounds_spec, "Flat key = value spec file");
  bounds->add_flag("--json", bounds_json, "Machine-readable output");
  bounds->add_flag("--regimes", bounds_regimes, "Append the regime comparison table");
  auto* verify = bounds->add_subcommand("verify", "Empirical perturbation-bound check");
  gnnl_perturbation_config pcfg;
  gnnl_perturbation_config_default(&pcfg);
  verify->add_option("--trials", pcfg.trials, "Random trials")->capture_default_str();
  verify->add_option("--seed", pcfg.seed, "Seed")->capture_default_str();
  verify->add_option("--depth", pcfg.layers, "Tree depth L")->capture_default_str();
  verify->add_option("--branch", pcfg.d, "Branching factor d")->capture_default_str();
  verify->add_option("--dim", pcfg.r, "Embedding dimension r")->capture_default_str();
  verify->add_option("--cap", pcfg.cap, "Norm cap for W1, W2, beta, x")->capture_default_str();

  // portagg
  auto* portagg = app.add_subcommand("portagg", "Exact injective port aggregation");
  portagg->require_subcommand(1);
  auto* selftest = portagg->add_subcommand("selftest", "Exhaustive injectivity check");
  std::uint64_t pa_alphabet = 3;
  int pa_ports = 3;
  std::uint64_t pa_bound = 0;
  selftest->add_option("--alphabet", pa_alphabet, "Alphabet size")->capture_default_str();
  selftest->add_option("--ports", pa_ports, "Number of ports")->capture_default_str();
  selftest->add_option("--bound", pa_bound, "Alphabet bound N (0 = automatic)");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "Check every expected corpus verdict");
  bool repro_all = false;
  bool repro_json = false;
  std::string repro_out;
  TrialOptions repro_opts;
  repro->add_flag("--all", repro_all, "Every pair under every applicable model")->required();
  repro_opts.add_to(repro);
  repro->add_flag("--json", repro_json, "Machine-readable output");
  repro->add_option("--out", repro_out, "Write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (corpus_list->parsed()) {
      char* text = nullptr;
      check(gnnl_corpus_list(&text));
      std::cout << take(text);
    } else if (corpus_emit->parsed()) {
      gnnl_pair* raw = nullptr;
      check(gnnl_pair_build(emit_name.c_str(), emit_dim, &raw));
      PairPtr pair(raw);
      char* paths = nullptr;
      check(gnnl_pair_emit(pair.get(), emit_dir.c_str(), &paths));
      std::cout << take(paths);
    } else if (props->parsed()) {
      const GraphPtr g = load(props_file);
      char* text = nullptr;
      check(gnnl_graph_properties_report(g.get(), props_json ? 1 : 0, &text));
      std::cout << take(text);
    } else if (iso->parsed()) {
      const GraphPtr a = load(iso_a);
      const GraphPtr b = load(iso_b);
      bool use_ports = iso_ports;
      if (!iso_ports && !iso_no_ports) {
        use_ports = gnnl_graph_has_ports(a.get()) && gnnl_graph_has_ports(b.get());
      }
      int same = 0;
      char* text = nullptr;
      check(gnnl_isocheck(a.get(), b.get(), use_ports ? GNNL_VIEW_PORTS : GNNL_VIEW_MULTISET,
                          &same, &text));
      const std::string report = take(text);
      std::cout << report;
      if (report.find("witness_check FAILED") != std::string::npos) return kExitMismatch;
    } else if (embed->parsed()) {
      const GraphPtr g = load(embed_file);
      std::vector<double> v(embed_dim);
      double f = 0.0;
      check(gnnl_embed(g.get(), model_of(embed_model), embed_layers, embed_dim, embed_seed,
                       readout_of(embed_readout), v.data(), &f));
      std::ostringstream out;
      out << "model " << embed_model << "\nlayers " << embed_layers << "\ndim " << embed_dim
          << "\nseed " << embed_seed << "\nreadout " << embed_readout << "\nvector";
      char buf[32];
      for (double x : v) {
        std::snprintf(buf, sizeof buf, " %.17g", x);
        out << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g", f);
      out << "\nf " << buf << "\nlabel " << (f > 0.5 ? 1 : 0) << "\n";
      std::cout << out.str();
    } else if (dist->parsed()) {
      const PairPtr pair = load_pair(dist_pair, dist_opts.dim);
      const gnnl_model model = model_of(dist_model);
      const gnnl_trial_config cfg = dist_opts.config();
      int separated = 0;
      char* text = nullptr;
      char* json = nullptr;
      check(gnnl_distinguish(pair.get(), model, &cfg, &separated, nullptr, &text, &json));
      const std::string t = take(text);
      const std::string j = take(json);
      int has_expectation = 0;
      int expected = 0;
      check(gnnl_pair_expected_verdict(pair.get(), model, &has_expectation, &expected));
      std::string report = dist_json ? j : t;
      if (has_expectation && !dist_json) {
        report += std::string("expected ") + (expected ? "distinguishable" : "indistinguishable") +
                  "\n";
      }
      emit(report, dist_out);
      if (has_expectation && expected != separated) return kExitMismatch;
    } else if (trees->parsed()) {
      const GraphPtr g = load(trees_file);
      char* text = nullptr;
      check(gnnl_tree_distribution(g.get(), trees_depth, trees_json ? 1 : 0, &text));
      std::cout << take(text);
    } else if (verify->parsed()) {
      int passed = 0;
      char* text = nullptr;
      check(gnnl_bounds_verify(&pcfg, &passed, &text));
      std::cout << take(text);
      if (!passed) return kExitMismatch;
    } else if (bounds->parsed()) {
      gnnl_bound_spec spec;
      gnnl_bound_spec_default(&spec);
      if (!bounds_spec.empty()) check(gnnl_bound_spec_load(bounds_spec.c_str(), &spec));
      char* text = nullptr;
      char* json = nullptr;
      check(gnnl_bounds_compute(&spec, nullptr, &text, &json));
      const std::string t = take(text);
      const std::string j = take(json);
      std::cout << (bounds_json ? j : t);
      if (bounds_regimes) {
        char* table = nullptr;
        check(gnnl_bounds_regime_table(&spec, &table));
        std::cout << take(table);
      }
    } else if (selftest->parsed()) {
      int passed = 0;
      char* text = nullptr;
      check(gnnl_portagg_selftest(pa_alphabet, pa_ports, pa_bound, nullptr, nullptr, &passed,
                                  &text));
      std::cout << take(text);
      if (!passed) return kExitMismatch;
    } else if (repro->parsed()) {
      const gnnl_trial_config cfg = repro_opts.config();
      int ok = 0;
      char* text = nullptr;
      char* json = nullptr;
      check(gnnl_reproduce_all(&cfg, &ok, &text, &json));
      const std::string t = take(text);
      const std::string j = take(json);
      emit(repro_json ? j : t, repro_out);
      if (!ok) return kExitMismatch;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
