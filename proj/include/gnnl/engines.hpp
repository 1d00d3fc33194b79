#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gnnl/graph.hpp"
#include "gnnl/trees.hpp"

namespace gnnl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Element-wise nonlinearity with its declared Lipschitz constant.
struct Activation {
  std::string name;
  std::function<double(double)> fn;
  double lipschitz = 1.0;

  Vector operator()(const Vector& x) const { return x.unaryExpr(fn); }
};

/// phi (update), rho (post-aggregation), g (pre-aggregation) and psi (node
/// classifier squash). Requires phi(0) = rho(0) = g(0) = 0 and |phi| <= bound.
struct ActivationSuite {
  Activation phi;
  Activation rho;
  Activation g;
  Activation psi;
  double phi_bound = 1.0;  // b

  /// tanh for phi, rho and g; logistic psi.
  static ActivationSuite tanh_suite();
  /// Throws Error when a zero-preservation requirement fails.
  void check() const;
};

double spectral_norm(const Matrix& m);

/// Shared weights of every engine. Norms are always measured from the
/// matrices, never taken from input.
class GnnParams {
 public:
  GnnParams(Matrix w1, Matrix w2, Vector beta, std::size_t layers,
            ActivationSuite suite = ActivationSuite::tanh_suite());

  std::size_t dim() const { return static_cast<std::size_t>(w1_.rows()); }
  std::size_t layers() const { return layers_; }
  const Matrix& w1() const { return w1_; }
  const Matrix& w2() const { return w2_; }
  const Vector& beta() const { return beta_; }
  const ActivationSuite& suite() const { return suite_; }

  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double b_beta() const { return b_beta_; }

 private:
  Matrix w1_;
  Matrix w2_;
  Vector beta_;
  std::size_t layers_;
  ActivationSuite suite_;
  double b1_;
  double b2_;
  double b_beta_;
};

/// Uniform on [-1, 1) built from raw 64-bit draws, so streams are identical
/// across standard libraries.
double uniform_pm1(std::mt19937_64& rng);
/// Scaled down (never up) so the spectral norm is at most `cap`.
Matrix cap_spectral_norm(Matrix m, double cap);
/// Scaled down (never up) so the l2 norm is at most `cap`.
Vector cap_norm(Vector v, double cap);
Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double cap);
Vector random_vector(std::size_t n, std::mt19937_64& rng, double cap);
/// W1, W2, beta with i.i.d. uniform [-1, 1] entries, each capped at `cap`.
GnnParams random_params(std::size_t dim, std::size_t layers, std::mt19937_64& rng,
                        double cap = 1.0);

using EmbeddingTable = std::vector<Vector>;

enum class Model { Lu, Cpn, Dime, DimePorts, Hdcpn };
enum class Readout { Sum, Mean, Max };

std::string to_string(Model m);
std::string to_string(Readout r);
/// Both throw UnknownNameError on names outside the listed set.
Model parse_model(const std::string& s);
Readout parse_readout(const std::string& s);

/// Whether the model reads the port layer / the position layer.
bool model_uses_ports(Model m);
bool model_uses_positions(Model m);

// Geometry. Degenerate configurations (zero-length edge, collinear triple)
// give cos = 1, sin = 0 for angles and are omitted from dihedral sets.
double distance(const Point3& a, const Point3& b);
/// Angle at `apex` between rays to `a` and `b`, in [0, pi].
double angle_at(const Point3& a, const Point3& apex, const Point3& b);
/// Angle between planes (w,u,v) and (u,v,z) about the axis u-v, in [0, pi].
std::optional<double> dihedral(const Point3& w, const Point3& u, const Point3& v, const Point3& z);
/// Dihedral angles alpha_wuvz for w in neigh(u)\{v}, z in neigh(v)\{u}.
std::vector<double> dihedral_set(const Graph& g, NodeId u, NodeId v);

struct LuTrace {
  EmbeddingTable embeddings;
  double max_aggregation_norm = 0.0;  // max over nodes and layers of ||rho(sum g(h))||_2
};

/// Mean-field update h_v = phi(W1 x_v + W2 rho(sum_u g(h_u))), h^0 = 0.
EmbeddingTable lu_forward(const Graph& g, const GnnParams& p);
LuTrace lu_forward_traced(const Graph& g, const GnnParams& p);

/// Port-weighted update h_v = phi(W1 x_v + W2 sum_j omega(j, t_j) g(h_{c_v(j)})).
EmbeddingTable cpn_forward(const Graph& g, const GnnParams& p);
/// omega(a, b) = 2^-(a (D + 1) + b): an injective scalar code of a port pair.
double port_pair_weight(int local, int remote, std::size_t max_degree);

/// Directional message passing over distances and angles; h_v = sum_u m_uv.
EmbeddingTable dime_forward(const Graph& g, const GnnParams& p);

/// Port-ordered combination of geometry-refined messages. With
/// `use_dihedrals` false this is DimeNet messages under port numbering.
EmbeddingTable hdcpn_forward(const Graph& g, const GnnParams& p, bool use_dihedrals = true);

EmbeddingTable forward(Model m, const Graph& g, const GnnParams& p);

/// Throws Error on an empty table. Unordered sums (neighbors, readout, f)
/// add terms in lexicographic order, so relabeling a graph leaves every
/// output bit-identical.
Vector readout(const EmbeddingTable& tbl, Readout mode);

/// f(G) = mean over nodes of psi(beta . h_v) on the LU engine.
double classify(const Graph& g, const GnnParams& p);
double classify_embeddings(const EmbeddingTable& tbl, const GnnParams& p);

struct TreeEvaluation {
  Vector embedding;
  Vector root_aggregation;            // rho(sum over children g(T_child)); zero at depth 0
  double max_aggregation_norm = 0.0;  // over every internal tree node
};

/// The LU update applied recursively on a computation tree.
TreeEvaluation evaluate_tree(const ComputationTree& t, const GnnParams& p);
/// f_c(T) = psi(beta . T_L).
double classify_tree(const ComputationTree& t, const GnnParams& p);

struct MarginQuantities {
  double margin = 0.0;  // p(f, y)
  double loss = 0.0;    // loss_gamma(-p)
};

/// p = y(2f - 1) + (1 - y)(1 - 2f); ramp loss with value 1 at a = 0.
MarginQuantities margin_quantities(double f, int y, double gamma);
double ramp_loss(double a, double gamma);

}  // namespace gnnl
