#include "gnnl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "gnnl/engines.hpp"
#include "gnnl/graph.hpp"
#include "gnnl/trees.hpp"
#include "json.hpp"

namespace gnnl {

namespace {

constexpr double kCriticalWindow = 1e-12;
// Measured quantities may exceed an attained bound by float rounding only.
constexpr double kRoundingSlack = 1e-12;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError("bad value for " + key + ": '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError("bad integer for " + key + ": '" + text + "'");
  return v;
}

double ratio(double actual, double bound) {
  if (bound > 0.0) return actual / bound;
  return actual > 0.0 ? HUGE_VAL : 0.0;
}

bool exceeds(double actual, double bound) { return actual > bound * (1.0 + kRoundingSlack); }

}  // namespace

void BoundSpec::validate() const {
  const std::pair<const char*, double> reals[] = {
      {"C_phi", c_phi}, {"C_rho", c_rho}, {"C_g", c_g},       {"b", b},
      {"B_x", b_x},     {"B_1", b_1},     {"B_2", b_2},       {"B_beta", b_beta},
      {"epsilon", epsilon}, {"empirical_risk", empirical_risk}};
  for (const auto& [name, v] : reals) {
    if (!std::isfinite(v) || v < 0.0) throw Error(std::string(name) + " must be finite and >= 0");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error("gamma must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (r < 1 || layers < 1 || m < 1) throw Error("r, L and m must be at least 1");
  if (d < 0 || vc_nodes < 0) throw Error("d and N must be nonnegative");
}

BoundSpec parse_bound_spec(const std::string& text) {
  BoundSpec s;
  std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters;
  auto real = [&](const char* key, double BoundSpec::*field) {
    setters[key] = [&s, field](const std::string& k, const std::string& v) {
      s.*field = parse_real(k, v);
    };
  };
  auto integer = [&](const char* key, std::int64_t BoundSpec::*field) {
    setters[key] = [&s, field](const std::string& k, const std::string& v) {
      s.*field = parse_int(k, v);
    };
  };
  real("C_phi", &BoundSpec::c_phi);
  real("C_rho", &BoundSpec::c_rho);
  real("C_g", &BoundSpec::c_g);
  real("b", &BoundSpec::b);
  real("B_x", &BoundSpec::b_x);
  real("B_1", &BoundSpec::b_1);
  real("B_2", &BoundSpec::b_2);
  real("B_beta", &BoundSpec::b_beta);
  real("gamma", &BoundSpec::gamma);
  real("delta", &BoundSpec::delta);
  real("epsilon", &BoundSpec::epsilon);
  real("empirical_risk", &BoundSpec::empirical_risk);
  integer("r", &BoundSpec::r);
  integer("d", &BoundSpec::d);
  integer("L", &BoundSpec::layers);
  integer("m", &BoundSpec::m);
  integer("N", &BoundSpec::vc_nodes);

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto sep = line.find_first_of("=:");
    if (sep == std::string::npos) sep = line.find_first_of(" \t");
    if (sep == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, sep));
    const std::string value = trim(line.substr(sep + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(key, value);
  }
  s.validate();
  return s;
}

double geometric_ratio(double x, std::int64_t layers) {
  const double l = static_cast<double>(layers);
  if (std::abs(x - 1.0) < kCriticalWindow) return l;
  // expm1/log1p keep full precision near x = 1; pow stays exact on small integers.
  if (std::abs(x - 1.0) < 1e-3) return std::expm1(l * std::log1p(x - 1.0)) / (x - 1.0);
  return (std::pow(x, l) - 1.0) / (x - 1.0);
}

double percolation(const BoundSpec& s) { return s.c_rho * s.c_g * s.c_phi * s.b_2; }

double compute_M(const BoundSpec& s) {
  return s.c_phi * geometric_ratio(percolation(s) * static_cast<double>(s.d), s.layers);
}

double compute_Rbar(const BoundSpec& s) {
  const double cd = percolation(s) * static_cast<double>(s.d);
  const double saturated = s.b * std::sqrt(static_cast<double>(s.r));
  const double propagated = s.c_phi * s.b_1 * s.b_x * geometric_ratio(cd, s.layers);
  return s.c_rho * s.c_g * static_cast<double>(s.d) * std::min(saturated, propagated);
}

double compute_Z(const BoundSpec& s) {
  return s.c_phi * s.b_1 * s.b_x + s.c_phi * s.b_2 * compute_Rbar(s);
}

namespace {

double covering_scale(const BoundSpec& s) {
  const double z = compute_Z(s);
  const double m_value = compute_M(s);
  return std::max(z, m_value * std::sqrt(static_cast<double>(s.r)) *
                         std::max(s.b_x * s.b_1, compute_Rbar(s) * s.b_2));
}

}  // namespace

QBound compute_Q_and_bound(const BoundSpec& s) {
  QBound out;
  const double m = static_cast<double>(s.m);
  out.q = 24.0 * s.b_beta * std::sqrt(m) * covering_scale(s);
  out.bound = 4.0 / (s.gamma * m);
  if (out.q <= 1.0) {
    out.q_valid = false;
    return out;
  }
  out.bound += 24.0 * static_cast<double>(s.r) * s.b_beta * compute_Z(s) / (s.gamma * std::sqrt(m)) *
               std::sqrt(3.0 * std::log(out.q));
  return out;
}

double confidence_term(const BoundSpec& s) {
  return 3.0 * std::sqrt(std::log(2.0 / s.delta) / (2.0 * static_cast<double>(s.m)));
}

double population_bound(double empirical_risk, const BoundSpec& s) {
  return empirical_risk + 2.0 * compute_Q_and_bound(s).bound + confidence_term(s);
}

double covering_log_size(const BoundSpec& s) {
  const double r = static_cast<double>(s.r);
  return 3.0 * r * r * std::log1p(6.0 * s.b_beta * covering_scale(s) / s.epsilon);
}

Regime regime_of(const BoundSpec& s) {
  const double cd = percolation(s) * static_cast<double>(s.d);
  if (std::abs(cd - 1.0) < kCriticalWindow) return Regime::Critical;
  return cd < 1.0 ? Regime::Below : Regime::Above;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Below: return "Cd<1";
    case Regime::Critical: return "Cd=1";
    case Regime::Above: return "Cd>1";
  }
  return "?";
}

BoundReport compute_bound_report(const BoundSpec& s) {
  s.validate();
  BoundReport r;
  r.spec = s;
  r.percolation = percolation(s);
  r.cd = r.percolation * static_cast<double>(s.d);
  r.regime = regime_of(s);
  r.m_value = compute_M(s);
  r.r_bar = compute_Rbar(s);
  r.z = compute_Z(s);
  r.q = compute_Q_and_bound(s);
  r.confidence = confidence_term(s);
  r.population = population_bound(s.empirical_risk, s);
  r.covering = covering_log_size(s);
  return r;
}

RegimeTable regime_table(const BoundSpec& base) {
  base.validate();
  if (base.d < 1) throw Error("regime table needs d >= 1");
  const double lipschitz = base.c_rho * base.c_g * base.c_phi;
  if (!(lipschitz > 0.0)) throw Error("regime table needs positive Lipschitz constants");
  struct Target {
    const char* label;
    double cd;
    const char* gnn;
    const char* rnn;
  };
  const Target targets[] = {
      {"< 1/d", 0.5, "O~(r d / (sqrt(m) gamma))", "O~(r / (sqrt(m) gamma))"},
      {"= 1/d", 1.0, "O~(r d L / (sqrt(m) gamma))", "O~(r L / (sqrt(m) gamma))"},
      {"> 1/d", 2.0, "O~(r d sqrt(r L) / (sqrt(m) gamma))", "O~(r sqrt(r L) / (sqrt(m) gamma))"},
  };
  RegimeTable t;
  for (const auto& target : targets) {
    BoundSpec s = base;
    s.b_2 = target.cd / (lipschitz * static_cast<double>(s.d));
    RegimeRow row;
    row.label = target.label;
    row.cd = percolation(s) * static_cast<double>(s.d);
    const QBound at_l = compute_Q_and_bound(s);
    s.layers = base.layers * 2;
    const QBound at_2l = compute_Q_and_bound(s);
    row.bound_l = at_l.bound;
    row.bound_2l = at_2l.bound;
    row.log_q_l = std::log(at_l.q);
    row.log_q_2l = std::log(at_2l.q);
    row.gnn_scaling = target.gnn;
    row.rnn_scaling = target.rnn;
    t.rows.push_back(row);
  }
  if (base.vc_nodes > 0) {
    const double r = static_cast<double>(base.r);
    t.vc_value = r * r * r * static_cast<double>(base.vc_nodes) / std::sqrt(static_cast<double>(base.m));
  }
  return t;
}

std::string format_bound_report(const BoundReport& r) {
  const auto& s = r.spec;
  std::ostringstream out;
  out << "C_phi " << num(s.c_phi) << "\nC_rho " << num(s.c_rho) << "\nC_g " << num(s.c_g)
      << "\nb " << num(s.b) << "\nB_x " << num(s.b_x) << "\nB_1 " << num(s.b_1) << "\nB_2 "
      << num(s.b_2) << "\nB_beta " << num(s.b_beta) << "\nr " << s.r << "\nd " << s.d << "\nL "
      << s.layers << "\nm " << s.m << "\ngamma " << num(s.gamma) << "\ndelta " << num(s.delta)
      << "\nepsilon " << num(s.epsilon) << "\nempirical_risk " << num(s.empirical_risk) << "\n";
  out << "percolation " << num(r.percolation) << "\n"
      << "Cd " << num(r.cd) << "\n"
      << "regime " << to_string(r.regime) << "\n"
      << "M " << num(r.m_value) << "\n"
      << "Rbar " << num(r.r_bar) << "\n"
      << "Z " << num(r.z) << "\n"
      << "Q " << num(r.q.q) << "\n";
  if (!r.q.q_valid) out << "warning Q <= 1; bound reduced to 4/(gamma m)\n";
  out << "rademacher_bound " << num(r.q.bound) << "\n"
      << "confidence_term " << num(r.confidence) << "\n"
      << "population_bound " << num(r.population) << "\n"
      << "covering_log_size " << num(r.covering) << "\n";
  return out.str();
}

std::string bound_report_json(const BoundReport& r) {
  const auto& s = r.spec;
  nlohmann::ordered_json j;
  j["spec"] = {{"C_phi", s.c_phi}, {"C_rho", s.c_rho}, {"C_g", s.c_g},   {"b", s.b},
               {"B_x", s.b_x},     {"B_1", s.b_1},     {"B_2", s.b_2},   {"B_beta", s.b_beta},
               {"r", s.r},         {"d", s.d},         {"L", s.layers},  {"m", s.m},
               {"gamma", s.gamma}, {"delta", s.delta}, {"epsilon", s.epsilon},
               {"empirical_risk", s.empirical_risk}};
  j["percolation"] = r.percolation;
  j["Cd"] = r.cd;
  j["regime"] = to_string(r.regime);
  j["M"] = r.m_value;
  j["Rbar"] = r.r_bar;
  j["Z"] = r.z;
  j["Q"] = r.q.q;
  j["Q_valid"] = r.q.q_valid;
  j["rademacher_bound"] = r.q.bound;
  j["confidence_term"] = r.confidence;
  j["population_bound"] = r.population;
  j["covering_log_size"] = r.covering;
  return j.dump(2) + "\n";
}

std::string format_regime_table(const RegimeTable& t, const BoundSpec& base) {
  std::ostringstream out;
  out << "regime  Cd     bound(L=" << base.layers << ")  bound(L=" << base.layers * 2
      << ")  ratio  logQ(L)  logQ(2L)  GNN  |  RNN\n";
  for (const auto& row : t.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s  %-5.2f  %.6g  %.6g  %.4f  %.4f  %.4f  ", row.label.c_str(),
                  row.cd, row.bound_l, row.bound_2l, row.bound_2l / row.bound_l, row.log_q_l,
                  row.log_q_2l);
    out << line << row.gnn_scaling << "  |  " << row.rnn_scaling << "\n";
  }
  if (t.vc_value) {
    out << "VC      r^3 N / sqrt(m) = " << num(*t.vc_value) << "  O~(r^3 N / sqrt(m))\n";
  }
  return out.str();
}

namespace {

ComputationTree random_tree(std::int64_t depth, std::int64_t branch, std::size_t dim, double bx,
                            std::mt19937_64& rng) {
  ComputationTree t;
  Vector x = random_vector(dim, rng, HUGE_VAL);
  const double n = x.norm();
  if (n > 0.0) x *= bx / n;
  t.features.assign(x.data(), x.data() + x.size());
  t.depth = static_cast<std::size_t>(depth);
  if (depth > 0) {
    for (std::int64_t j = 0; j < branch; ++j) {
      t.children.push_back(random_tree(depth - 1, branch, dim, bx, rng));
    }
  }
  return t;
}

}  // namespace

PerturbationReport verify_perturbation_bounds(const PerturbationConfig& c) {
  if (c.trials == 0 || c.d < 0 || c.layers < 1 || c.r < 1 || !(c.cap > 0.0)) {
    throw Error("perturbation check needs trials >= 1, d >= 0, L >= 1, r >= 1, cap > 0");
  }
  BoundSpec spec;
  spec.b_x = spec.b_1 = spec.b_2 = spec.b_beta = c.cap;
  spec.r = c.r;
  spec.d = c.d;
  spec.layers = c.layers;

  PerturbationReport rep;
  rep.config = c;
  rep.m_value = compute_M(spec);
  rep.r_bar = compute_Rbar(spec);
  rep.z = compute_Z(spec);
  const auto dim = static_cast<std::size_t>(c.r);
  const auto layers = static_cast<std::size_t>(c.layers);

  for (std::size_t t = 0; t < c.trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    const ComputationTree tree = random_tree(c.layers, c.d, dim, c.cap, rng);
    const GnnParams p = random_params(dim, layers, rng, c.cap);

    // Perturbation sizes spread over three decades; trial 0 is unperturbed.
    const double scale = t == 0 ? 0.0 : std::pow(10.0, -1.5 * (uniform_pm1(rng) + 1.0));
    auto nudge = [&](const Matrix& w) {
      return cap_spectral_norm(w + scale * random_matrix(dim, dim, rng, HUGE_VAL), c.cap);
    };
    Matrix w1 = nudge(p.w1());
    Matrix w2 = nudge(p.w2());
    Vector beta = cap_norm(p.beta() + scale * random_vector(dim, rng, HUGE_VAL), c.cap);
    const GnnParams q(std::move(w1), std::move(w2), std::move(beta), layers);

    const TreeEvaluation ep = evaluate_tree(tree, p);
    const TreeEvaluation eq = evaluate_tree(tree, q);
    const double delta = (ep.embedding - eq.embedding).norm();
    const double delta_bound = rep.m_value * c.cap * spectral_norm(p.w1() - q.w1()) +
                               rep.m_value * rep.r_bar * spectral_norm(p.w2() - q.w2());
    const auto& psi = p.suite().psi;
    const double lambda =
        std::abs(psi.fn(p.beta().dot(ep.embedding)) - psi.fn(q.beta().dot(eq.embedding)));
    const double lambda_bound = (p.beta() - q.beta()).norm() * rep.z + c.cap * delta;
    const double agg = std::max(ep.max_aggregation_norm, eq.max_aggregation_norm);
    const double out_norm = std::max(ep.embedding.norm(), eq.embedding.norm());

    rep.delta_violations += exceeds(delta, delta_bound);
    rep.lambda_violations += exceeds(lambda, lambda_bound);
    rep.r_violations += exceeds(agg, rep.r_bar);
    rep.z_violations += exceeds(out_norm, rep.z);
    rep.max_delta_ratio = std::max(rep.max_delta_ratio, ratio(delta, delta_bound));
    rep.max_lambda_ratio = std::max(rep.max_lambda_ratio, ratio(lambda, lambda_bound));
    rep.max_r_ratio = std::max(rep.max_r_ratio, ratio(agg, rep.r_bar));
    rep.max_z_ratio = std::max(rep.max_z_ratio, ratio(out_norm, rep.z));
  }
  return rep;
}

std::string format_perturbation_report(const PerturbationReport& r) {
  std::ostringstream out;
  out << "trials " << r.config.trials << "\nseed " << r.config.seed << "\nd " << r.config.d
      << "\nL " << r.config.layers << "\nr " << r.config.r << "\ncap " << num(r.config.cap)
      << "\nM " << num(r.m_value) << "\nRbar " << num(r.r_bar) << "\nZ " << num(r.z) << "\n"
      << "delta_violations " << r.delta_violations << "\n"
      << "lambda_violations " << r.lambda_violations << "\n"
      << "aggregation_violations " << r.r_violations << "\n"
      << "output_norm_violations " << r.z_violations << "\n"
      << "max_delta_ratio " << num(r.max_delta_ratio) << "\n"
      << "max_lambda_ratio " << num(r.max_lambda_ratio) << "\n"
      << "max_aggregation_ratio " << num(r.max_r_ratio) << "\n"
      << "max_output_norm_ratio " << num(r.max_z_ratio) << "\n"
      << "result " << (r.passed() ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace gnnl
