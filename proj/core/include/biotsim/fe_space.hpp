#pragma once

#include <map>
#include <span>
#include <vector>

#include "biotsim/mesh.hpp"
#include "biotsim/quadrature.hpp"
#include "biotsim/types.hpp"

namespace biotsim {

enum class Family { P1Scalar, P2Vector2 };

struct BoundaryDof {
  int dof = 0;
  int component = 0;
};

// Lagrange finite-element space over a Mesh.
//
// Node numbering: mesh vertices first, then (for P2) edge midpoints in
// sorted vertex-pair order. Vector components are interleaved per node,
// dof = components*node + component. The per-element local order is
// (v0, v1, v2) for P1 and (v0, v1, v2, e01, e12, e20) for P2.
// Immutable after construction.
class FeSpace {
 public:
  FeSpace(const Mesh& mesh, Family family);

  const Mesh& mesh() const { return *mesh_; }
  Family family() const { return family_; }
  int components() const { return components_; }
  int n_nodes() const { return n_nodes_; }
  int n_dofs() const { return components_ * n_nodes_; }
  int nodes_per_element() const { return nodes_per_element_; }
  int dofs_per_element() const { return components_ * nodes_per_element_; }

  std::span<const int> element_nodes(int t) const {
    return {element_nodes_.data() + static_cast<size_t>(t) * nodes_per_element_,
            static_cast<size_t>(nodes_per_element_)};
  }
  int dof_of(int node, int component) const { return components_ * node + component; }

  Vec2 node_coord(int node) const { return node_coords_[node]; }

  const EdgeConnectivity& connectivity() const { return connectivity_; }

  // (dof, component) pairs on the given boundary tag, sorted by dof.
  // Empty list for tags absent from the mesh.
  const std::vector<BoundaryDof>& boundary_dofs(int tag) const;

  // Scalar nodes on a boundary edge in trace order: {v0, v1} for P1,
  // {v0, v1, midpoint} for P2.
  std::vector<int> trace_nodes(const BoundaryEdge& e) const;

 private:
  const Mesh* mesh_;
  Family family_;
  int components_;
  int n_nodes_;
  int nodes_per_element_;
  std::vector<int> element_nodes_;
  std::vector<Vec2> node_coords_;
  EdgeConnectivity connectivity_;
  std::map<int, std::vector<BoundaryDof>> boundary_dofs_;
};

// Coefficients of a finite-element function, one value per global DOF.
struct CoefficientVector {
  const FeSpace* space = nullptr;
  std::vector<double> values;

  CoefficientVector() = default;
  explicit CoefficientVector(const FeSpace& s) : space(&s), values(s.n_dofs(), 0.0) {}
};

// --- reference-element basis -------------------------------------------

struct ElementGeometry {
  std::array<Vec2, 3> corner;
  std::array<Vec2, 3> grad_lambda;  // gradients of the barycentric coords
  double area;
};
ElementGeometry element_geometry(const Mesh& mesh, int t);

inline Vec2 physical_point(const ElementGeometry& geo, const QuadratureRule::Point& q) {
  return {q.l0 * geo.corner[0][0] + q.l1 * geo.corner[1][0] + q.l2 * geo.corner[2][0],
          q.l0 * geo.corner[0][1] + q.l1 * geo.corner[1][1] + q.l2 * geo.corner[2][1]};
}

inline std::array<double, 3> p1_shape(const QuadratureRule::Point& q) {
  return {q.l0, q.l1, q.l2};
}
std::array<double, 6> p2_shape(const QuadratureRule::Point& q);
std::array<Vec2, 6> p2_shape_grad(const ElementGeometry& geo, const QuadratureRule::Point& q);

// --- field evaluation at a barycentric point of element t ----------------

double eval_scalar(const CoefficientVector& f, int t, const QuadratureRule::Point& q);
Vec2 eval_scalar_grad(const CoefficientVector& f, int t, const ElementGeometry& geo);
Vec2 eval_vector(const CoefficientVector& f, int t, const QuadratureRule::Point& q);
Mat2 eval_vector_grad(const CoefficientVector& f, int t, const ElementGeometry& geo,
                      const QuadratureRule::Point& q);
double eval_vector_div(const CoefficientVector& f, int t, const ElementGeometry& geo,
                       const QuadratureRule::Point& q);

// Nodal interpolation of analytic data at time t.
CoefficientVector interpolate(const FeSpace& space, const ScalarField& f, double t);
CoefficientVector interpolate(const FeSpace& space, const VectorField& f, double t);

}  // namespace biotsim
