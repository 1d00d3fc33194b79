#include "gnnl/engines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gnnl {

ActivationSuite ActivationSuite::tanh_suite() {
  auto tanh_act = [](const char* name) {
    return Activation{name, [](double x) { return std::tanh(x); }, 1.0};
  };
  ActivationSuite s{tanh_act("tanh"), tanh_act("tanh"), tanh_act("tanh"),
                    Activation{"sigmoid", [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, 1.0},
                    1.0};
  return s;
}

void ActivationSuite::check() const {
  if (phi.fn(0.0) != 0.0) throw Error("activation suite requires phi(0) = 0");
  if (rho.fn(0.0) != 0.0) throw Error("activation suite requires rho(0) = 0");
  if (g.fn(0.0) != 0.0) throw Error("activation suite requires g(0) = 0");
  if (!(phi_bound > 0.0)) throw Error("activation suite requires a positive bound b");
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

GnnParams::GnnParams(Matrix w1, Matrix w2, Vector beta, std::size_t layers, ActivationSuite suite)
    : w1_(std::move(w1)),
      w2_(std::move(w2)),
      beta_(std::move(beta)),
      layers_(layers),
      suite_(std::move(suite)) {
  const auto r = w1_.rows();
  if (r == 0 || w1_.cols() != r || w2_.rows() != r || w2_.cols() != r || beta_.size() != r) {
    throw DimensionError("W1 and W2 must be r x r and beta an r-vector");
  }
  suite_.check();
  b1_ = spectral_norm(w1_);
  b2_ = spectral_norm(w2_);
  b_beta_ = beta_.norm();
}

double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

Matrix cap_spectral_norm(Matrix m, double cap) {
  const double s = spectral_norm(m);
  if (s > cap) m *= cap / s;
  return m;
}

Vector cap_norm(Vector v, double cap) {
  const double s = v.norm();
  if (s > cap) v *= cap / s;
  return v;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double cap) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform_pm1(rng);
  }
  return cap_spectral_norm(std::move(m), cap);
}

Vector random_vector(std::size_t n, std::mt19937_64& rng, double cap) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform_pm1(rng);
  return cap_norm(std::move(v), cap);
}

GnnParams random_params(std::size_t dim, std::size_t layers, std::mt19937_64& rng, double cap) {
  Matrix w1 = random_matrix(dim, dim, rng, cap);
  Matrix w2 = random_matrix(dim, dim, rng, cap);
  Vector beta = random_vector(dim, rng, cap);
  return GnnParams(std::move(w1), std::move(w2), std::move(beta), layers);
}

std::string to_string(Model m) {
  switch (m) {
    case Model::Lu: return "lu";
    case Model::Cpn: return "cpn";
    case Model::Dime: return "dime";
    case Model::DimePorts: return "dime+ports";
    case Model::Hdcpn: return "hdcpn";
  }
  return "?";
}

std::string to_string(Readout r) {
  switch (r) {
    case Readout::Sum: return "sum";
    case Readout::Mean: return "mean";
    case Readout::Max: return "max";
  }
  return "?";
}

Model parse_model(const std::string& s) {
  if (s == "lu") return Model::Lu;
  if (s == "cpn") return Model::Cpn;
  if (s == "dime") return Model::Dime;
  if (s == "dime+ports" || s == "dimeports") return Model::DimePorts;
  if (s == "hdcpn") return Model::Hdcpn;
  throw UnknownNameError("unknown model '" + s + "' (expected lu|cpn|dime|dime+ports|hdcpn)");
}

Readout parse_readout(const std::string& s) {
  if (s == "sum") return Readout::Sum;
  if (s == "mean") return Readout::Mean;
  if (s == "max") return Readout::Max;
  throw UnknownNameError("unknown readout '" + s + "' (expected sum|mean|max)");
}

bool model_uses_ports(Model m) {
  return m == Model::Cpn || m == Model::DimePorts || m == Model::Hdcpn;
}

bool model_uses_positions(Model m) {
  return m == Model::Dime || m == Model::DimePorts || m == Model::Hdcpn;
}

namespace {

constexpr double kDegenerate = 1e-12;

Vector to_vector(const Vec& x) { return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())); }

void require_dim(const Graph& g, const GnnParams& p) {
  if (g.node_count() > 0 && g.feature_dim() != p.dim()) {
    throw DimensionError("feature dimension " + std::to_string(g.feature_dim()) +
                         " does not match embedding dimension " + std::to_string(p.dim()));
  }
}

void require_geometry(const Graph& g, const GnnParams& p) {
  if (!g.has_positions()) throw MissingLayerError("model needs node positions");
  if (p.dim() < 4) throw DimensionError("geometric models need embedding dimension r >= 4");
}

/// Sum in lexicographic order of the terms, so equal multisets give
/// bit-identical results however the terms were enumerated.
Vector canonical_sum(std::vector<Vector> terms, Eigen::Index r) {
  std::sort(terms.begin(), terms.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  Vector sum = Vector::Zero(r);
  for (const auto& t : terms) sum += t;
  return sum;
}

double canonical_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

Vector unit(std::size_t dim, Eigen::Index k) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
  e(k) = 1.0;
  return e;
}

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

/// Directed message ids: edge k carries (u -> v) as 2k and (v -> u) as 2k + 1 for u < v.
std::size_t directed_id(const Graph& g, NodeId from, NodeId to) {
  const std::size_t k = g.edge_index(from, to);
  return 2 * k + (from < to ? 0 : 1);
}

struct Geometry {
  // angle features per (directed edge w->u, directed edge u->v) are computed on demand
  const Graph& g;
  double edge_length(NodeId a, NodeId b) const { return distance(g.position(a), g.position(b)); }
  double angle(NodeId w, NodeId u, NodeId v) const {
    return angle_at(g.position(w), g.position(u), g.position(v));
  }
};

/// DimeNet-style message history m^0 .. m^rounds, indexed by directed id.
std::vector<std::vector<Vector>> dime_messages(const Graph& g, const GnnParams& p, std::size_t rounds) {
  const auto& s = p.suite();
  const std::size_t r = p.dim();
  const Vector u_e = unit(r, 0);
  const Vector u_c = unit(r, 1);
  const Vector u_s = unit(r, 2);
  const Vector u_d = unit(r, 3);
  Geometry geo{g};

  std::vector<std::vector<Vector>> history;
  std::vector<Vector> m(2 * g.edge_count());
  for (const auto& e : g.edges()) {
    for (auto [from, to] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      const Vector x = to_vector(g.features(from)) + to_vector(g.features(to));
      m[directed_id(g, from, to)] = s.phi(p.w1() * x + u_e * geo.edge_length(from, to));
    }
  }
  history.push_back(m);

  for (std::size_t round = 0; round < rounds; ++round) {
    std::vector<Vector> next(m.size());
    for (const auto& e : g.edges()) {
      for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        const double e_uv = geo.edge_length(u, v);
        std::vector<Vector> terms;
        for (NodeId w : g.neighbors(u)) {
          if (w == v) continue;
          const double a = geo.angle(w, u, v);
          const double e_wu = geo.edge_length(w, u);
          terms.push_back(s.phi(p.w2() * m[directed_id(g, w, u)] + u_e * e_uv + u_c * std::cos(a) +
                         u_s * std::sin(a) + u_d * e_wu));
        }
        const Vector tilde = canonical_sum(std::move(terms), static_cast<Eigen::Index>(r));
        const std::size_t id = directed_id(g, u, v);
        next[id] = s.phi(p.w1() * m[id] + p.w2() * tilde);
      }
    }
    m = std::move(next);
    history.push_back(m);
  }
  return history;
}

}  // namespace

double distance(const Point3& a, const Point3& b) { return norm(sub(a, b)); }

double angle_at(const Point3& a, const Point3& apex, const Point3& b) {
  const Point3 x = sub(a, apex);
  const Point3 y = sub(b, apex);
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx < kDegenerate || ny < kDegenerate) return 0.0;
  return std::atan2(norm(cross(x, y)), dot(x, y));
}

std::optional<double> dihedral(const Point3& w, const Point3& u, const Point3& v, const Point3& z) {
  const Point3 b1 = sub(u, w);
  const Point3 b2 = sub(v, u);
  const Point3 b3 = sub(z, v);
  const Point3 n1 = cross(b1, b2);
  const Point3 n2 = cross(b2, b3);
  const double l1 = norm(n1);
  const double l2 = norm(n2);
  if (l1 < kDegenerate || l2 < kDegenerate) return std::nullopt;
  return std::atan2(norm(cross(n1, n2)), dot(n1, n2));
}

std::vector<double> dihedral_set(const Graph& g, NodeId u, NodeId v) {
  std::vector<double> out;
  for (NodeId w : g.neighbors(u)) {
    if (w == v) continue;
    for (NodeId z : g.neighbors(v)) {
      if (z == u) continue;
      if (auto a = dihedral(g.position(w), g.position(u), g.position(v), g.position(z))) {
        out.push_back(*a);
      }
    }
  }
  return out;
}

LuTrace lu_forward_traced(const Graph& g, const GnnParams& p) {
  require_dim(g, p);
  const auto& s = p.suite();
  const auto r = static_cast<Eigen::Index>(p.dim());
  const std::size_t n = g.node_count();
  LuTrace trace;
  EmbeddingTable h(n, Vector::Zero(r));
  std::vector<Vector> wx(n);
  for (NodeId v = 0; v < n; ++v) wx[v] = p.w1() * to_vector(g.features(v));
  for (std::size_t layer = 0; layer < p.layers(); ++layer) {
    EmbeddingTable next(n);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<Vector> terms;
      for (NodeId u : g.neighbors(v)) terms.push_back(s.g(h[u]));
      const Vector agg = s.rho(canonical_sum(std::move(terms), r));
      trace.max_aggregation_norm = std::max(trace.max_aggregation_norm, agg.norm());
      next[v] = s.phi(wx[v] + p.w2() * agg);
    }
    h = std::move(next);
  }
  trace.embeddings = std::move(h);
  return trace;
}

EmbeddingTable lu_forward(const Graph& g, const GnnParams& p) {
  return lu_forward_traced(g, p).embeddings;
}

double port_pair_weight(int local, int remote, std::size_t max_degree) {
  const int exponent = local * (static_cast<int>(max_degree) + 1) + remote;
  return std::ldexp(1.0, -exponent);
}

EmbeddingTable cpn_forward(const Graph& g, const GnnParams& p) {
  require_dim(g, p);
  require_consistent_ports(g);
  const auto& s = p.suite();
  const auto r = static_cast<Eigen::Index>(p.dim());
  const std::size_t n = g.node_count();
  const std::size_t max_deg = g.max_degree();

  // Per node, (neighbor, weight) in port order.
  std::vector<std::vector<std::pair<NodeId, double>>> weighted(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto& row = g.ports().ports_of(v);
    for (std::size_t j = 0; j < row.size(); ++j) {
      weighted[v].push_back(
          {row[j].node, port_pair_weight(static_cast<int>(j) + 1, row[j].port, max_deg)});
    }
  }

  EmbeddingTable h(n, Vector::Zero(r));
  std::vector<Vector> wx(n);
  for (NodeId v = 0; v < n; ++v) wx[v] = p.w1() * to_vector(g.features(v));
  for (std::size_t layer = 0; layer < p.layers(); ++layer) {
    EmbeddingTable next(n);
    for (NodeId v = 0; v < n; ++v) {
      Vector sum = Vector::Zero(r);
      for (const auto& [u, w] : weighted[v]) sum += w * s.g(h[u]);
      next[v] = s.phi(wx[v] + p.w2() * sum);
    }
    h = std::move(next);
  }
  return h;
}

EmbeddingTable dime_forward(const Graph& g, const GnnParams& p) {
  require_dim(g, p);
  require_geometry(g, p);
  const auto r = static_cast<Eigen::Index>(p.dim());
  const auto history = dime_messages(g, p, p.layers());
  const auto& m = history.back();
  EmbeddingTable h(g.node_count(), Vector::Zero(r));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::vector<Vector> terms;
    for (NodeId u : g.neighbors(v)) terms.push_back(m[directed_id(g, u, v)]);
    h[v] = canonical_sum(std::move(terms), r);
  }
  return h;
}

EmbeddingTable hdcpn_forward(const Graph& g, const GnnParams& p, bool use_dihedrals) {
  require_dim(g, p);
  require_geometry(g, p);
  require_consistent_ports(g);
  const auto& s = p.suite();
  const std::size_t r = p.dim();
  const std::size_t n = g.node_count();
  const std::size_t max_deg = g.max_degree();
  const Vector u_c = unit(r, 1);
  const Vector u_s = unit(r, 2);

  // Geometric refinement term per directed edge; constant across layers.
  std::vector<Vector> plane_term(2 * g.edge_count(), Vector::Zero(static_cast<Eigen::Index>(r)));
  if (use_dihedrals) {
    for (const auto& e : g.edges()) {
      for (auto [u, v] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        std::vector<double> cosines;
        std::vector<double> sines;
        for (double a : dihedral_set(g, u, v)) {
          cosines.push_back(std::cos(a));
          sines.push_back(std::sin(a));
        }
        const double sc = canonical_sum(std::move(cosines));
        const double ss = canonical_sum(std::move(sines));
        plane_term[directed_id(g, u, v)] = u_c * sc + u_s * ss;
      }
    }
  }

  const auto history = dime_messages(g, p, p.layers() == 0 ? 0 : p.layers() - 1);
  EmbeddingTable h(n, Vector::Zero(static_cast<Eigen::Index>(r)));
  for (std::size_t layer = 0; layer < p.layers(); ++layer) {
    const auto& m = history[layer];
    EmbeddingTable next(n);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<std::pair<NodeId, double>> weighted;
      const auto& row = g.ports().ports_of(v);
      for (std::size_t j = 0; j < row.size(); ++j) {
        weighted.push_back(
            {row[j].node, port_pair_weight(static_cast<int>(j) + 1, row[j].port, max_deg)});
      }
      Vector sum = Vector::Zero(static_cast<Eigen::Index>(r));
      for (const auto& [u, w] : weighted) {
        const std::size_t id = directed_id(g, u, v);
        const Vector refined = s.phi(p.w1() * m[id] + plane_term[id]);
        sum += w * s.g(refined);
      }
      next[v] = s.phi(p.w1() * h[v] + p.w2() * sum);
    }
    h = std::move(next);
  }
  return h;
}

EmbeddingTable forward(Model m, const Graph& g, const GnnParams& p) {
  switch (m) {
    case Model::Lu: return lu_forward(g, p);
    case Model::Cpn: return cpn_forward(g, p);
    case Model::Dime: return dime_forward(g, p);
    case Model::DimePorts: return hdcpn_forward(g, p, false);
    case Model::Hdcpn: return hdcpn_forward(g, p, true);
  }
  throw Error("unknown model");
}

Vector readout(const EmbeddingTable& tbl, Readout mode) {
  if (tbl.empty()) throw Error("readout of an empty graph");
  if (mode == Readout::Max) {
    Vector out = tbl.front();
    for (std::size_t v = 1; v < tbl.size(); ++v) out = out.cwiseMax(tbl[v]);
    return out;
  }
  Vector out = canonical_sum(tbl, tbl.front().size());
  if (mode == Readout::Mean) out /= static_cast<double>(tbl.size());
  return out;
}

double classify_embeddings(const EmbeddingTable& tbl, const GnnParams& p) {
  if (tbl.empty()) throw Error("cannot classify an empty graph");
  std::vector<double> values;
  values.reserve(tbl.size());
  for (const auto& h : tbl) values.push_back(p.suite().psi.fn(p.beta().dot(h)));
  return canonical_sum(std::move(values)) / static_cast<double>(tbl.size());
}

double classify(const Graph& g, const GnnParams& p) {
  return classify_embeddings(lu_forward(g, p), p);
}

TreeEvaluation evaluate_tree(const ComputationTree& t, const GnnParams& p) {
  const auto r = static_cast<Eigen::Index>(p.dim());
  TreeEvaluation out;
  out.root_aggregation = Vector::Zero(r);
  if (t.depth == 0) {
    out.embedding = Vector::Zero(r);
    return out;
  }
  if (t.features.size() != p.dim()) throw DimensionError("tree feature dimension mismatch");
  const auto& s = p.suite();
  std::vector<Vector> terms;
  for (const auto& child : t.children) {
    TreeEvaluation sub = evaluate_tree(child, p);
    out.max_aggregation_norm = std::max(out.max_aggregation_norm, sub.max_aggregation_norm);
    terms.push_back(s.g(sub.embedding));
  }
  out.root_aggregation = s.rho(canonical_sum(std::move(terms), r));
  out.max_aggregation_norm = std::max(out.max_aggregation_norm, out.root_aggregation.norm());
  out.embedding = s.phi(p.w1() * to_vector(t.features) + p.w2() * out.root_aggregation);
  return out;
}

double classify_tree(const ComputationTree& t, const GnnParams& p) {
  return p.suite().psi.fn(p.beta().dot(evaluate_tree(t, p).embedding));
}

double ramp_loss(double a, double gamma) {
  if (!(gamma > 0.0)) throw Error("margin gamma must be positive");
  if (a > 0.0) return 1.0;
  if (a >= -gamma) return 1.0 + a / gamma;
  return 0.0;
}

MarginQuantities margin_quantities(double f, int y, double gamma) {
  if (y != 0 && y != 1) throw Error("label must be 0 or 1");
  MarginQuantities q;
  q.margin = y * (2.0 * f - 1.0) + (1 - y) * (1.0 - 2.0 * f);
  q.loss = ramp_loss(-q.margin, gamma);
  return q;
}

}  // namespace gnnl
