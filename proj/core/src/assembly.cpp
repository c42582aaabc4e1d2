#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "biotsim/biot.hpp"

namespace biotsim {

std::pair<double, double> lame_from_E_nu(double E, double nu) {
  if (!(E > 0.0)) throw std::domain_error("lame_from_E_nu: E must be positive");
  if (!(nu > 0.0 && nu < 0.5))
    throw std::domain_error("lame_from_E_nu: nu must lie in (0, 0.5)");
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

BiotMaterial BiotMaterial::make(double E, double nu, double alpha, double c0, double kappa,
                                double mu_f) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("BiotMaterial: alpha must lie in (0, 1]");
  if (c0 < 0.0) throw std::domain_error("BiotMaterial: c0 must be non-negative");
  if (!(kappa > 0.0 && mu_f > 0.0))
    throw std::domain_error("BiotMaterial: kappa and mu_f must be positive");
  BiotMaterial m;
  m.E = E;
  m.nu = nu;
  m.alpha = alpha;
  m.c0 = c0;
  m.kappa = kappa;
  m.mu_f = mu_f;
  std::tie(m.lambda, m.mu) = lame_from_E_nu(E, nu);
  m.K = kappa / mu_f;
  return m;
}

namespace {

struct EdgeGeometry {
  Vec2 x0;
  Vec2 tangent;  // x(s) = x0 + s * tangent, s in [0,1]
  double length;
  Vec2 normal;  // outward unit normal (domain on the left of the edge)
};

EdgeGeometry edge_geometry(const Mesh& mesh, const BoundaryEdge& e) {
  EdgeGeometry g;
  g.x0 = mesh.vertices[e.v0];
  const Vec2& x1 = mesh.vertices[e.v1];
  g.tangent = {x1[0] - g.x0[0], x1[1] - g.x0[1]};
  g.length = norm(g.tangent);
  g.normal = {g.tangent[1] / g.length, -g.tangent[0] / g.length};
  return g;
}

inline std::array<double, 2> p1_trace(double s) { return {1.0 - s, s}; }
inline std::array<double, 3> p2_trace(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
}

void require_tag(const Mesh& mesh, int tag, const char* role) {
  if (!mesh.has_boundary_tag(tag))
    throw std::invalid_argument(std::string("missing boundary tag ") + std::to_string(tag) +
                                " for " + role);
}

void check_problem_data(const Mesh& mesh, const ProblemData& data, bool steady) {
  for (int tag : data.traction_tags) require_tag(mesh, tag, "traction");
  for (int tag : data.flux_tags) require_tag(mesh, tag, "flux");
  for (int tag : data.dirichlet_u_tags) require_tag(mesh, tag, "displacement Dirichlet");
  for (int tag : data.dirichlet_p_tags) require_tag(mesh, tag, "pressure Dirichlet");
  if (data.robin) require_tag(mesh, data.robin->tag, "Robin");
  if (data.dirichlet_u_tags.empty())
    throw std::invalid_argument(
        "displacement needs a Dirichlet boundary (rigid motions are unconstrained)");
  if (steady && data.dirichlet_p_tags.empty() && !data.robin)
    throw std::invalid_argument(
        "steady pressure needs a Dirichlet boundary or a Robin condition");
}

// Per-element matrices, integrated with the degree-4 rule (exact for all
// products of basis derivatives with constant coefficients).
struct LocalMatrices {
  double uu[12][12];  // 2 mu (eps(u), eps(v))
  double uxi[12][3];  // -(psi_j, div phi_col) pairing, rows = u dofs
  double m1[3][3];    // (psi_i, psi_j)
  double s1[3][3];    // (grad psi_i, grad psi_j)
};

void local_matrices(const Mesh& mesh, int t, double mu, LocalMatrices& loc) {
  std::memset(&loc, 0, sizeof(loc));
  const ElementGeometry geo = element_geometry(mesh, t);
  const QuadratureRule& rule = quadrature_rule(4);
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * 2.0 * geo.area;
    const auto g2 = p2_shape_grad(geo, rule.points[q]);
    const auto v1 = p1_shape(rule.points[q]);
    for (int a = 0; a < 6; ++a) {
      for (int c = 0; c < 2; ++c) {
        const int row = 2 * a + c;
        for (int b = 0; b < 6; ++b) {
          const double common = dot(g2[a], g2[b]);
          for (int d = 0; d < 2; ++d) {
            const double v = mu * ((c == d ? common : 0.0) + g2[a][d] * g2[b][c]);
            loc.uu[row][2 * b + d] += w * v;
          }
        }
        for (int j = 0; j < 3; ++j) loc.uxi[row][j] -= w * v1[j] * g2[a][c];
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) loc.m1[i][j] += w * v1[i] * v1[j];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      loc.s1[i][j] = dot(geo.grad_lambda[i], geo.grad_lambda[j]) * geo.area;
}

std::vector<unsigned char> constraint_mask(const FeSpace& u_space, const FeSpace& scalar_space,
                                           const ProblemData& data, const BlockLayout& layout,
                                           bool with_p) {
  std::vector<unsigned char> mask(layout.total, 0);
  for (int tag : data.dirichlet_u_tags)
    for (const auto& bd : u_space.boundary_dofs(tag)) mask[layout.off_u + bd.dof] = 1;
  if (with_p)
    for (int tag : data.dirichlet_p_tags)
      for (const auto& bd : scalar_space.boundary_dofs(tag)) mask[layout.off_p + bd.dof] = 1;
  return mask;
}

void fill_dirichlet_u(const FeSpace& u_space, const ProblemData& data, double t, int offset,
                      std::vector<double>& g) {
  for (int tag : data.dirichlet_u_tags) {
    for (const auto& bd : u_space.boundary_dofs(tag)) {
      double value = 0.0;
      if (data.dirichlet_u) {
        const Vec2 x = u_space.node_coord(bd.dof / 2);
        value = data.dirichlet_u(x[0], x[1], t)[bd.component];
      }
      g[offset + bd.dof] = value;
    }
  }
}

void fill_dirichlet_p(const FeSpace& scalar_space, const ProblemData& data, double t, int offset,
                      std::vector<double>& g) {
  for (int tag : data.dirichlet_p_tags) {
    for (const auto& bd : scalar_space.boundary_dofs(tag)) {
      double value = 0.0;
      if (data.dirichlet_p) {
        const Vec2 x = scalar_space.node_coord(bd.dof);
        value = data.dirichlet_p(x[0], x[1], t);
      }
      g[offset + bd.dof] = value;
    }
  }
}

// rhs -= A_raw * g on free rows; rhs = g on constrained rows.
void apply_lifting(const SparseMatrix& raw, std::span<const unsigned char> constrained,
                   const std::vector<double>& g, std::vector<double>& rhs) {
  const std::vector<double> lift = raw.multiply(g);
  for (size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = constrained[i] ? g[i] : rhs[i] - lift[i];
}

void add_body_force(const FeSpace& u_space, const VectorField& f, double t, int offset,
                    std::vector<double>& rhs) {
  const QuadratureRule& rule = quadrature_rule(6);
  const Mesh& mesh = u_space.mesh();
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    const auto nodes = u_space.element_nodes(el);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * geo.area;
      const Vec2 x = physical_point(geo, rule.points[q]);
      const Vec2 fv = f(x[0], x[1], t);
      const auto shape = p2_shape(rule.points[q]);
      for (int a = 0; a < 6; ++a) {
        rhs[offset + 2 * nodes[a]] += w * fv[0] * shape[a];
        rhs[offset + 2 * nodes[a] + 1] += w * fv[1] * shape[a];
      }
    }
  }
}

void add_source(const FeSpace& scalar_space, const ScalarField& source, int region, double t,
                int offset, std::vector<double>& rhs) {
  const QuadratureRule& rule = quadrature_rule(6);
  const Mesh& mesh = scalar_space.mesh();
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    if (region >= 0 && mesh.triangle_region[el] != region) continue;
    const ElementGeometry geo = element_geometry(mesh, el);
    const auto nodes = scalar_space.element_nodes(el);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * geo.area;
      const Vec2 x = physical_point(geo, rule.points[q]);
      const double s = source(x[0], x[1], t);
      const auto shape = p1_shape(rule.points[q]);
      for (int i = 0; i < 3; ++i) rhs[offset + nodes[i]] += w * s * shape[i];
    }
  }
}

void add_traction(const FeSpace& u_space, const ProblemData& data, double t, int offset,
                  std::vector<double>& rhs) {
  if (!data.traction || data.traction_tags.empty()) return;
  const EdgeQuadrature& rule = edge_quadrature();
  const Mesh& mesh = u_space.mesh();
  for (const auto& e : mesh.boundary_edges) {
    if (std::find(data.traction_tags.begin(), data.traction_tags.end(), e.tag) ==
        data.traction_tags.end())
      continue;
    const EdgeGeometry geo = edge_geometry(mesh, e);
    const auto nodes = u_space.trace_nodes(e);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q] * geo.length;
      const Vec2 x = {geo.x0[0] + s * geo.tangent[0], geo.x0[1] + s * geo.tangent[1]};
      const Vec2 h = data.traction(x[0], x[1], t, geo.normal);
      const auto shape = p2_trace(s);
      for (size_t k = 0; k < nodes.size(); ++k) {
        rhs[offset + 2 * nodes[k]] += w * h[0] * shape[k];
        rhs[offset + 2 * nodes[k] + 1] += w * h[1] * shape[k];
      }
    }
  }
}

void add_flux_and_robin(const FeSpace& scalar_space, const ProblemData& data, double t,
                        int offset, std::vector<double>& rhs) {
  const bool has_flux = data.flux && !data.flux_tags.empty();
  if (!has_flux && !data.robin) return;
  const EdgeQuadrature& rule = edge_quadrature();
  const Mesh& mesh = scalar_space.mesh();
  for (const auto& e : mesh.boundary_edges) {
    const bool flux_edge = has_flux && std::find(data.flux_tags.begin(), data.flux_tags.end(),
                                                 e.tag) != data.flux_tags.end();
    const bool robin_edge = data.robin && e.tag == data.robin->tag;
    if (!flux_edge && !robin_edge) continue;
    const EdgeGeometry geo = edge_geometry(mesh, e);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q] * geo.length;
      const Vec2 x = {geo.x0[0] + s * geo.tangent[0], geo.x0[1] + s * geo.tangent[1]};
      double value = 0.0;
      if (flux_edge) value += data.flux(x[0], x[1], t, geo.normal);
      if (robin_edge) value += data.robin->conductance * data.robin->external_pressure;
      const auto shape = p1_trace(s);
      rhs[offset + e.v0] += w * value * shape[0];
      rhs[offset + e.v1] += w * value * shape[1];
    }
  }
}

// Robin boundary mass c_b <p, psi> on the scalar block.
void add_robin_matrix(const FeSpace& scalar_space, const RobinData& robin, int offset,
                      std::vector<Triplet>& triplets) {
  const EdgeQuadrature& rule = edge_quadrature();
  const Mesh& mesh = scalar_space.mesh();
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != robin.tag) continue;
    const EdgeGeometry geo = edge_geometry(mesh, e);
    double local[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * geo.length * robin.conductance;
      const auto shape = p1_trace(rule.points[q]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) local[i][j] += w * shape[i] * shape[j];
    }
    const int vid[2] = {e.v0, e.v1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        triplets.push_back({offset + vid[i], offset + vid[j], local[i][j]});
  }
}

void check_same_mesh(const FeSpace& u_space, const FeSpace& scalar_space) {
  if (&u_space.mesh() != &scalar_space.mesh())
    throw std::invalid_argument("spaces must be built on the same mesh");
  if (u_space.family() != Family::P2Vector2 || scalar_space.family() != Family::P1Scalar)
    throw std::invalid_argument("expected a P2 vector space and a P1 scalar space");
}

CoupledSystem assemble_coupled(const FeSpace& u_space, const FeSpace& scalar_space,
                               const BiotMaterial& mat, double inv_dt, const ProblemData& data) {
  check_same_mesh(u_space, scalar_space);
  check_problem_data(u_space.mesh(), data, inv_dt == 0.0);

  CoupledSystem sys;
  sys.u_space = &u_space;
  sys.scalar_space = &scalar_space;
  sys.mat = mat;
  sys.inv_dt = inv_dt;

  const int n_u = u_space.n_dofs();
  const int n_s = scalar_space.n_dofs();
  sys.layout = {n_u, n_s, 0, n_u, n_u + n_s, n_u + 2 * n_s};

  const Mesh& mesh = u_space.mesh();
  const double inv_lambda = 1.0 / mat.lambda;
  const double storage = mat.c0 + mat.alpha * mat.alpha * inv_lambda;

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(mesh.n_triangles()) * 252);
  std::vector<Triplet> mass_triplets;
  mass_triplets.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);

  LocalMatrices loc;
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    local_matrices(mesh, el, mat.mu, loc);
    const auto un = u_space.element_nodes(el);
    const auto sn = scalar_space.element_nodes(el);

    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 2; ++c) {
        const int row = sys.layout.off_u + 2 * un[a] + c;
        for (int b = 0; b < 6; ++b)
          for (int d = 0; d < 2; ++d)
            triplets.push_back({row, sys.layout.off_u + 2 * un[b] + d, loc.uu[2 * a + c][2 * b + d]});
        for (int j = 0; j < 3; ++j) {
          const double v = loc.uxi[2 * a + c][j];
          triplets.push_back({row, sys.layout.off_xi + sn[j], v});
          triplets.push_back({sys.layout.off_xi + sn[j], row, v});
        }
      }

    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double m = loc.m1[i][j];
        triplets.push_back({sys.layout.off_xi + sn[i], sys.layout.off_xi + sn[j], -inv_lambda * m});
        triplets.push_back({sys.layout.off_xi + sn[i], sys.layout.off_p + sn[j],
                            mat.alpha * inv_lambda * m});
        if (inv_dt > 0.0) {
          triplets.push_back({sys.layout.off_p + sn[i], sys.layout.off_xi + sn[j],
                              -inv_dt * mat.alpha * inv_lambda * m});
        }
        triplets.push_back({sys.layout.off_p + sn[i], sys.layout.off_p + sn[j],
                            inv_dt * storage * m + mat.K * loc.s1[i][j]});
        mass_triplets.push_back({sn[i], sn[j], m});
      }
  }

  if (data.robin) add_robin_matrix(scalar_space, *data.robin, sys.layout.off_p, triplets);

  sys.raw_matrix = SparseMatrix::from_triplets(sys.layout.total, sys.layout.total,
                                               std::move(triplets));
  sys.mass_p1 = SparseMatrix::from_triplets(n_s, n_s, std::move(mass_triplets));
  sys.constrained = constraint_mask(u_space, scalar_space, data, sys.layout, true);
  sys.matrix = sys.raw_matrix.eliminate_dirichlet(sys.constrained);
  return sys;
}

}  // namespace

CoupledSystem assemble_coupled_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                      const BiotMaterial& mat, double dt,
                                      const ProblemData& data) {
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_coupled_system: dt must be positive");
  return assemble_coupled(u_space, scalar_space, mat, 1.0 / dt, data);
}

CoupledSystem assemble_coupled_steady_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                             const BiotMaterial& mat, const ProblemData& data) {
  return assemble_coupled(u_space, scalar_space, mat, 0.0, data);
}

std::vector<double> assemble_coupled_rhs(const CoupledSystem& sys, const TransientState& prev,
                                         const ProblemData& data, double t_next,
                                         double load_time) {
  std::vector<double> rhs(sys.layout.total, 0.0);
  if (data.body_force) add_body_force(*sys.u_space, data.body_force, load_time, sys.layout.off_u, rhs);
  if (data.source)
    add_source(*sys.scalar_space, data.source, data.source_region, load_time, sys.layout.off_p, rhs);
  add_traction(*sys.u_space, data, load_time, sys.layout.off_u, rhs);
  add_flux_and_robin(*sys.scalar_space, data, load_time, sys.layout.off_p, rhs);

  if (sys.inv_dt > 0.0) {
    const double inv_lambda = 1.0 / sys.mat.lambda;
    const double storage = sys.mat.c0 + sys.mat.alpha * sys.mat.alpha * inv_lambda;
    const std::vector<double> mp = sys.mass_p1.multiply(prev.p.values);
    const std::vector<double> mxi = sys.mass_p1.multiply(prev.xi.values);
    for (int i = 0; i < sys.layout.n_scalar; ++i)
      rhs[sys.layout.off_p + i] +=
          sys.inv_dt * (storage * mp[i] - sys.mat.alpha * inv_lambda * mxi[i]);
  }

  std::vector<double> g(sys.layout.total, 0.0);
  fill_dirichlet_u(*sys.u_space, data, t_next, sys.layout.off_u, g);
  fill_dirichlet_p(*sys.scalar_space, data, t_next, sys.layout.off_p, g);
  apply_lifting(sys.raw_matrix, sys.constrained, g, rhs);
  return rhs;
}

TransientState coupled_step(const TransientState& state, const Factorization& fact,
                            const CoupledSystem& sys, const ProblemData& data, double dt,
                            LoadTimeLevel load_level) {
  const double t_next = state.t + dt;
  const double load_time = load_level == LoadTimeLevel::Next ? t_next : state.t;
  const std::vector<double> rhs = assemble_coupled_rhs(sys, state, data, t_next, load_time);
  const std::vector<double> x = fact.solve(rhs);

  TransientState next;
  next.t = t_next;
  next.u = CoefficientVector(*sys.u_space);
  next.xi = CoefficientVector(*sys.scalar_space);
  next.p = CoefficientVector(*sys.scalar_space);
  std::copy_n(x.begin() + sys.layout.off_u, sys.layout.n_u, next.u.values.begin());
  std::copy_n(x.begin() + sys.layout.off_xi, sys.layout.n_scalar, next.xi.values.begin());
  std::copy_n(x.begin() + sys.layout.off_p, sys.layout.n_scalar, next.p.values.begin());
  return next;
}

DecoupledSystem assemble_decoupled_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                          const BiotMaterial& mat, double dt,
                                          const ProblemData& data) {
  if (!(dt > 0.0)) throw std::invalid_argument("assemble_decoupled_system: dt must be positive");
  check_same_mesh(u_space, scalar_space);
  check_problem_data(u_space.mesh(), data, false);

  DecoupledSystem sys;
  sys.u_space = &u_space;
  sys.scalar_space = &scalar_space;
  sys.mat = mat;
  sys.inv_dt = 1.0 / dt;

  const int n_u = u_space.n_dofs();
  const int n_s = scalar_space.n_dofs();
  sys.stokes_layout = {n_u, n_s, 0, n_u, 0, n_u + n_s};

  const Mesh& mesh = u_space.mesh();
  const double inv_lambda = 1.0 / mat.lambda;
  const double storage = mat.c0 + mat.alpha * mat.alpha * inv_lambda;

  std::vector<Triplet> stokes;
  stokes.reserve(static_cast<size_t>(mesh.n_triangles()) * 230);
  std::vector<Triplet> diffusion;
  diffusion.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);
  std::vector<Triplet> mass_triplets;
  mass_triplets.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);

  LocalMatrices loc;
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    local_matrices(mesh, el, mat.mu, loc);
    const auto un = u_space.element_nodes(el);
    const auto sn = scalar_space.element_nodes(el);

    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 2; ++c) {
        const int row = 2 * un[a] + c;
        for (int b = 0; b < 6; ++b)
          for (int d = 0; d < 2; ++d)
            stokes.push_back({row, 2 * un[b] + d, loc.uu[2 * a + c][2 * b + d]});
        for (int j = 0; j < 3; ++j) {
          const double v = loc.uxi[2 * a + c][j];
          stokes.push_back({row, sys.stokes_layout.off_xi + sn[j], v});
          stokes.push_back({sys.stokes_layout.off_xi + sn[j], row, v});
        }
      }

    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double m = loc.m1[i][j];
        stokes.push_back({sys.stokes_layout.off_xi + sn[i], sys.stokes_layout.off_xi + sn[j],
                          -inv_lambda * m});
        diffusion.push_back({sn[i], sn[j], sys.inv_dt * storage * m + mat.K * loc.s1[i][j]});
        mass_triplets.push_back({sn[i], sn[j], m});
      }
  }

  if (data.robin) add_robin_matrix(scalar_space, *data.robin, 0, diffusion);

  sys.stokes_raw_matrix = SparseMatrix::from_triplets(sys.stokes_layout.total,
                                                      sys.stokes_layout.total, std::move(stokes));
  sys.diffusion_raw_matrix = SparseMatrix::from_triplets(n_s, n_s, std::move(diffusion));
  sys.mass_p1 = SparseMatrix::from_triplets(n_s, n_s, std::move(mass_triplets));

  sys.stokes_constrained = constraint_mask(u_space, scalar_space, data, sys.stokes_layout, false);
  sys.stokes_matrix = sys.stokes_raw_matrix.eliminate_dirichlet(sys.stokes_constrained);

  sys.diffusion_constrained.assign(n_s, 0);
  for (int tag : data.dirichlet_p_tags)
    for (const auto& bd : scalar_space.boundary_dofs(tag)) sys.diffusion_constrained[bd.dof] = 1;
  sys.diffusion_matrix = sys.diffusion_raw_matrix.eliminate_dirichlet(sys.diffusion_constrained);
  return sys;
}

TransientState decoupled_step(const TransientState& state, const Factorization& stokes_fact,
                              const Factorization& diffusion_fact, const DecoupledSystem& sys,
                              const ProblemData& data, double dt, LoadTimeLevel load_level) {
  const double t_next = state.t + dt;
  const double load_time = load_level == LoadTimeLevel::Next ? t_next : state.t;
  const double inv_lambda = 1.0 / sys.mat.lambda;
  const double storage = sys.mat.c0 + sys.mat.alpha * sys.mat.alpha * inv_lambda;
  const int n_s = sys.stokes_layout.n_scalar;

  // i) generalized Stokes step with the lagged pressure as data
  std::vector<double> rhs(sys.stokes_layout.total, 0.0);
  if (data.body_force) add_body_force(*sys.u_space, data.body_force, load_time, 0, rhs);
  add_traction(*sys.u_space, data, load_time, 0, rhs);
  {
    const std::vector<double> mp = sys.mass_p1.multiply(state.p.values);
    for (int i = 0; i < n_s; ++i)
      rhs[sys.stokes_layout.off_xi + i] -= sys.mat.alpha * inv_lambda * mp[i];
  }
  std::vector<double> g(sys.stokes_layout.total, 0.0);
  fill_dirichlet_u(*sys.u_space, data, t_next, 0, g);
  apply_lifting(sys.stokes_raw_matrix, sys.stokes_constrained, g, rhs);
  const std::vector<double> x = stokes_fact.solve(rhs);

  TransientState next;
  next.t = t_next;
  next.u = CoefficientVector(*sys.u_space);
  next.xi = CoefficientVector(*sys.scalar_space);
  std::copy_n(x.begin(), sys.stokes_layout.n_u, next.u.values.begin());
  std::copy_n(x.begin() + sys.stokes_layout.off_xi, n_s, next.xi.values.begin());

  // ii) reaction-diffusion step using the fresh total pressure
  std::vector<double> prhs(n_s, 0.0);
  if (data.source)
    add_source(*sys.scalar_space, data.source, data.source_region, load_time, 0, prhs);
  add_flux_and_robin(*sys.scalar_space, data, load_time, 0, prhs);
  {
    const std::vector<double> mp = sys.mass_p1.multiply(state.p.values);
    std::vector<double> dxi(n_s);
    for (int i = 0; i < n_s; ++i) dxi[i] = next.xi.values[i] - state.xi.values[i];
    const std::vector<double> mdxi = sys.mass_p1.multiply(dxi);
    for (int i = 0; i < n_s; ++i)
      prhs[i] += sys.inv_dt * (storage * mp[i] + sys.mat.alpha * inv_lambda * mdxi[i]);
  }
  std::vector<double> pg(n_s, 0.0);
  fill_dirichlet_p(*sys.scalar_space, data, t_next, 0, pg);
  apply_lifting(sys.diffusion_raw_matrix, sys.diffusion_constrained, pg, prhs);

  next.p = CoefficientVector(*sys.scalar_space);
  next.p.values = diffusion_fact.solve(prhs);
  return next;
}

SparseMatrix assemble_p1_mass(const FeSpace& scalar_space) {
  if (scalar_space.family() != Family::P1Scalar)
    throw std::invalid_argument("assemble_p1_mass: expected a P1 scalar space");
  const Mesh& mesh = scalar_space.mesh();
  const QuadratureRule& rule = quadrature_rule(4);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(mesh.n_triangles()) * 9);
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    const auto nodes = scalar_space.element_nodes(el);
    double local[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * geo.area;
      const auto shape = p1_shape(rule.points[q]);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) local[i][j] += w * shape[i] * shape[j];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.push_back({nodes[i], nodes[j], local[i][j]});
  }
  return SparseMatrix::from_triplets(scalar_space.n_dofs(), scalar_space.n_dofs(),
                                     std::move(triplets));
}

namespace {

// L2 projection of an element-wise integrand onto a P1 space.
CoefficientVector project_p1(const FeSpace& scalar_space,
                             const std::function<double(int, const QuadratureRule::Point&,
                                                        const ElementGeometry&)>& integrand) {
  const Mesh& mesh = scalar_space.mesh();
  const QuadratureRule& rule = quadrature_rule(4);
  std::vector<double> rhs(scalar_space.n_dofs(), 0.0);
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    const auto nodes = scalar_space.element_nodes(el);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * geo.area;
      const double v = integrand(el, rule.points[q], geo);
      const auto shape = p1_shape(rule.points[q]);
      for (int i = 0; i < 3; ++i) rhs[nodes[i]] += w * v * shape[i];
    }
  }
  const Factorization mass_fact(assemble_p1_mass(scalar_space));
  CoefficientVector out(scalar_space);
  out.values = mass_fact.solve(rhs);
  return out;
}

}  // namespace

CoefficientVector total_pressure_init(const CoefficientVector& u0, const CoefficientVector& p0,
                                      const BiotMaterial& mat) {
  if (&u0.space->mesh() != &p0.space->mesh())
    throw std::invalid_argument("total_pressure_init: spaces built on different meshes");
  return project_p1(*p0.space, [&](int el, const QuadratureRule::Point& q,
                                   const ElementGeometry& geo) {
    return mat.alpha * eval_scalar(p0, el, q) - mat.lambda * eval_vector_div(u0, el, geo, q);
  });
}

CoefficientVector recover_pressure(const CoefficientVector& xi, const CoefficientVector& u,
                                   const BiotMaterial& mat) {
  if (!(mat.alpha > 0.0)) throw std::domain_error("recover_pressure: alpha must be positive");
  return project_p1(*xi.space, [&](int el, const QuadratureRule::Point& q,
                                   const ElementGeometry& geo) {
    return (eval_scalar(xi, el, q) + mat.lambda * eval_vector_div(u, el, geo, q)) / mat.alpha;
  });
}

}  // namespace biotsim
