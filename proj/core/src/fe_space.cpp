#include "biotsim/fe_space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace biotsim {

namespace {

int find_edge(const EdgeConnectivity& conn, int a, int b) {
  const std::array<int, 2> key = a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
  const auto it = std::lower_bound(conn.edges.begin(), conn.edges.end(), key);
  if (it == conn.edges.end() || *it != key)
    throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") not in mesh");
  return static_cast<int>(it - conn.edges.begin());
}

}  // namespace

FeSpace::FeSpace(const Mesh& mesh, Family family)
    : mesh_(&mesh),
      family_(family),
      components_(family == Family::P2Vector2 ? 2 : 1),
      nodes_per_element_(family == Family::P2Vector2 ? 6 : 3),
      connectivity_(build_edge_connectivity(mesh)) {
  const int nv = mesh.n_vertices();
  const int ne = static_cast<int>(connectivity_.edges.size());
  n_nodes_ = (family == Family::P2Vector2) ? nv + ne : nv;

  node_coords_.resize(n_nodes_);
  for (int v = 0; v < nv; ++v) node_coords_[v] = mesh.vertices[v];
  if (family == Family::P2Vector2) {
    for (int e = 0; e < ne; ++e) {
      const Vec2& a = mesh.vertices[connectivity_.edges[e][0]];
      const Vec2& b = mesh.vertices[connectivity_.edges[e][1]];
      node_coords_[nv + e] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    }
  }

  element_nodes_.resize(static_cast<size_t>(mesh.n_triangles()) * nodes_per_element_);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    int* out = element_nodes_.data() + static_cast<size_t>(t) * nodes_per_element_;
    const auto& tri = mesh.triangles[t];
    out[0] = tri[0];
    out[1] = tri[1];
    out[2] = tri[2];
    if (family == Family::P2Vector2)
      for (int k = 0; k < 3; ++k) out[3 + k] = nv + connectivity_.triangle_edges[t][k];
  }

  // Boundary DOF index: all nodes on edges of each tag, every component.
  std::map<int, std::set<int>> nodes_by_tag;
  for (const auto& e : mesh.boundary_edges) {
    auto& nodes = nodes_by_tag[e.tag];
    nodes.insert(e.v0);
    nodes.insert(e.v1);
    if (family == Family::P2Vector2) nodes.insert(nv + find_edge(connectivity_, e.v0, e.v1));
  }
  for (const auto& [tag, nodes] : nodes_by_tag) {
    auto& dofs = boundary_dofs_[tag];
    for (int node : nodes)
      for (int c = 0; c < components_; ++c) dofs.push_back({dof_of(node, c), c});
  }
}

const std::vector<BoundaryDof>& FeSpace::boundary_dofs(int tag) const {
  static const std::vector<BoundaryDof> empty;
  const auto it = boundary_dofs_.find(tag);
  return it == boundary_dofs_.end() ? empty : it->second;
}

std::vector<int> FeSpace::trace_nodes(const BoundaryEdge& e) const {
  if (family_ == Family::P1Scalar) return {e.v0, e.v1};
  return {e.v0, e.v1, mesh_->n_vertices() + find_edge(connectivity_, e.v0, e.v1)};
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry geo;
  const auto& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k) geo.corner[k] = mesh.vertices[tri[k]];
  const Vec2& a = geo.corner[0];
  const Vec2& b = geo.corner[1];
  const Vec2& c = geo.corner[2];
  const double twice_area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  geo.area = 0.5 * twice_area;
  // grad lambda_i = rot90(P_{i+2} - P_{i+1}) / (2A), rot90(v) = (-v_y, v_x)
  const std::array<Vec2, 3> opposite = {{{c[0] - b[0], c[1] - b[1]},
                                         {a[0] - c[0], a[1] - c[1]},
                                         {b[0] - a[0], b[1] - a[1]}}};
  for (int k = 0; k < 3; ++k)
    geo.grad_lambda[k] = {-opposite[k][1] / twice_area, opposite[k][0] / twice_area};
  return geo;
}

std::array<double, 6> p2_shape(const QuadratureRule::Point& q) {
  return {q.l0 * (2.0 * q.l0 - 1.0), q.l1 * (2.0 * q.l1 - 1.0), q.l2 * (2.0 * q.l2 - 1.0),
          4.0 * q.l0 * q.l1,         4.0 * q.l1 * q.l2,         4.0 * q.l2 * q.l0};
}

std::array<Vec2, 6> p2_shape_grad(const ElementGeometry& geo, const QuadratureRule::Point& q) {
  const std::array<double, 3> l = {q.l0, q.l1, q.l2};
  const auto& g = geo.grad_lambda;
  std::array<Vec2, 6> grad;
  for (int i = 0; i < 3; ++i)
    grad[i] = {(4.0 * l[i] - 1.0) * g[i][0], (4.0 * l[i] - 1.0) * g[i][1]};
  const std::array<std::array<int, 2>, 3> pairs = {{{0, 1}, {1, 2}, {2, 0}}};
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = pairs[k];
    grad[3 + k] = {4.0 * (l[j] * g[i][0] + l[i] * g[j][0]),
                   4.0 * (l[j] * g[i][1] + l[i] * g[j][1])};
  }
  return grad;
}

double eval_scalar(const CoefficientVector& f, int t, const QuadratureRule::Point& q) {
  const auto nodes = f.space->element_nodes(t);
  const auto shape = p1_shape(q);
  double v = 0.0;
  for (int k = 0; k < 3; ++k) v += shape[k] * f.values[nodes[k]];
  return v;
}

Vec2 eval_scalar_grad(const CoefficientVector& f, int t, const ElementGeometry& geo) {
  const auto nodes = f.space->element_nodes(t);
  Vec2 g = {0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    g[0] += geo.grad_lambda[k][0] * f.values[nodes[k]];
    g[1] += geo.grad_lambda[k][1] * f.values[nodes[k]];
  }
  return g;
}

Vec2 eval_vector(const CoefficientVector& f, int t, const QuadratureRule::Point& q) {
  const auto nodes = f.space->element_nodes(t);
  const auto shape = p2_shape(q);
  Vec2 v = {0.0, 0.0};
  for (int k = 0; k < 6; ++k) {
    v[0] += shape[k] * f.values[2 * nodes[k]];
    v[1] += shape[k] * f.values[2 * nodes[k] + 1];
  }
  return v;
}

Mat2 eval_vector_grad(const CoefficientVector& f, int t, const ElementGeometry& geo,
                      const QuadratureRule::Point& q) {
  const auto nodes = f.space->element_nodes(t);
  const auto grad = p2_shape_grad(geo, q);
  Mat2 g = {{{0.0, 0.0}, {0.0, 0.0}}};
  for (int k = 0; k < 6; ++k) {
    const double cx = f.values[2 * nodes[k]];
    const double cy = f.values[2 * nodes[k] + 1];
    g[0][0] += cx * grad[k][0];
    g[0][1] += cx * grad[k][1];
    g[1][0] += cy * grad[k][0];
    g[1][1] += cy * grad[k][1];
  }
  return g;
}

double eval_vector_div(const CoefficientVector& f, int t, const ElementGeometry& geo,
                       const QuadratureRule::Point& q) {
  const Mat2 g = eval_vector_grad(f, t, geo, q);
  return g[0][0] + g[1][1];
}

CoefficientVector interpolate(const FeSpace& space, const ScalarField& f, double t) {
  if (space.family() != Family::P1Scalar)
    throw std::invalid_argument("interpolate: scalar data requires a P1 scalar space");
  CoefficientVector out(space);
  for (int n = 0; n < space.n_nodes(); ++n) {
    const Vec2 x = space.node_coord(n);
    out.values[n] = f(x[0], x[1], t);
  }
  return out;
}

CoefficientVector interpolate(const FeSpace& space, const VectorField& f, double t) {
  if (space.family() != Family::P2Vector2)
    throw std::invalid_argument("interpolate: vector data requires a P2 vector space");
  CoefficientVector out(space);
  for (int n = 0; n < space.n_nodes(); ++n) {
    const Vec2 x = space.node_coord(n);
    const Vec2 v = f(x[0], x[1], t);
    out.values[2 * n] = v[0];
    out.values[2 * n + 1] = v[1];
  }
  return out;
}

}  // namespace biotsim
