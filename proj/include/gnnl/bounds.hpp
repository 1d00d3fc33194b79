#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gnnl {

/// Scalars of the tree-classifier generalization bound. Defaults are the
/// reference configuration (all constants 1, r = 8, d = 3, L = 3, m = 1000).
struct BoundSpec {
  double c_phi = 1.0;
  double c_rho = 1.0;
  double c_g = 1.0;
  double b = 1.0;       // bound on |phi|
  double b_x = 1.0;     // feature norm cap
  double b_1 = 1.0;     // ||W1||_2 cap
  double b_2 = 1.0;     // ||W2||_2 cap
  double b_beta = 1.0;  // ||beta||_2 cap
  std::int64_t r = 8;
  std::int64_t d = 3;
  std::int64_t layers = 3;
  std::int64_t m = 1000;
  double gamma = 0.1;
  double delta = 0.05;
  double epsilon = 0.01;        // covering radius
  double empirical_risk = 0.0;  // margin risk on the sample
  std::int64_t vc_nodes = 0;    // N of the VC comparison row; 0 omits the row

  /// Throws Error when a constant is negative or non-finite, gamma <= 0,
  /// delta is outside (0, 1), or r, L, m < 1.
  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment; unset keys keep defaults.
/// Keys: C_phi C_rho C_g b B_x B_1 B_2 B_beta r d L m gamma delta epsilon
/// empirical_risk N. Throws ParseError on unknown keys or malformed values and
/// Error when validation fails.
BoundSpec parse_bound_spec(const std::string& text);

/// (x^L - 1) / (x - 1), taking the series limit L within 1e-12 of x = 1.
double geometric_ratio(double x, std::int64_t layers);

double percolation(const BoundSpec& s);  // C = C_rho C_g C_phi B_2
double compute_M(const BoundSpec& s);
double compute_Rbar(const BoundSpec& s);
double compute_Z(const BoundSpec& s);

struct QBound {
  double q = 0.0;
  double bound = 0.0;
  bool q_valid = true;  // false when Q <= 1: bound is then the 4/(gamma m) term alone
};

QBound compute_Q_and_bound(const BoundSpec& s);
double confidence_term(const BoundSpec& s);  // 3 sqrt(log(2/delta) / (2m))
double population_bound(double empirical_risk, const BoundSpec& s);
double covering_log_size(const BoundSpec& s);

enum class Regime { Below, Critical, Above };  // Cd < 1, = 1, > 1
Regime regime_of(const BoundSpec& s);
std::string to_string(Regime r);

struct BoundReport {
  BoundSpec spec;
  double percolation = 0.0;
  double cd = 0.0;
  Regime regime = Regime::Below;
  double m_value = 0.0;
  double r_bar = 0.0;
  double z = 0.0;
  QBound q;
  double confidence = 0.0;
  double population = 0.0;
  double covering = 0.0;
};

BoundReport compute_bound_report(const BoundSpec& s);

struct RegimeRow {
  std::string label;  // "< 1/d", "= 1/d", "> 1/d"
  double cd = 0.0;
  double bound_l = 0.0;
  double bound_2l = 0.0;
  double log_q_l = 0.0;
  double log_q_2l = 0.0;
  std::string gnn_scaling;
  std::string rnn_scaling;
};

struct RegimeTable {
  std::vector<RegimeRow> rows;
  std::optional<double> vc_value;  // r^3 N / sqrt(m), no constants
};

/// Rows at Cd = 0.5, 1, 2, obtained by setting B_2 on a copy of `base`.
/// Requires d >= 1.
RegimeTable regime_table(const BoundSpec& base);

std::string format_bound_report(const BoundReport& r);
std::string bound_report_json(const BoundReport& r);
std::string format_regime_table(const RegimeTable& t, const BoundSpec& base);

struct PerturbationConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::int64_t d = 3;
  std::int64_t layers = 3;
  std::int64_t r = 8;
  double cap = 1.0;  // B_1 = B_2 = B_beta = B_x
};

struct PerturbationReport {
  PerturbationConfig config;
  double m_value = 0.0;
  double r_bar = 0.0;
  double z = 0.0;
  std::size_t delta_violations = 0;
  std::size_t lambda_violations = 0;
  std::size_t r_violations = 0;
  std::size_t z_violations = 0;
  double max_delta_ratio = 0.0;  // actual / bound, worst trial
  double max_lambda_ratio = 0.0;
  double max_r_ratio = 0.0;
  double max_z_ratio = 0.0;

  bool passed() const {
    return delta_violations == 0 && lambda_violations == 0 && r_violations == 0 &&
           z_violations == 0;
  }
};

/// Runs the LU update on complete d-ary trees with random features of norm
/// B_x and compares measured embedding/probability changes and aggregation
/// norms against their closed-form bounds under the tanh suite.
PerturbationReport verify_perturbation_bounds(const PerturbationConfig& config);

std::string format_perturbation_report(const PerturbationReport& r);

}  // namespace gnnl
