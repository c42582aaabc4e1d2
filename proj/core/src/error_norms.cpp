#include "biotsim/error_norms.hpp"

#include <cmath>
#include <stdexcept>

namespace biotsim {

ErrorNorms error_norms(const CoefficientVector& f, const ScalarField& exact,
                       const GradField& exact_grad, double t) {
  const FeSpace& space = *f.space;
  if (space.family() != Family::P1Scalar)
    throw std::invalid_argument("error_norms: scalar exact data requires a P1 space");
  const QuadratureRule& rule = quadrature_rule(6);
  const Mesh& mesh = space.mesh();

  double l2sq = 0.0, semisq = 0.0;
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    const Vec2 gh = eval_scalar_grad(f, el, geo);  // constant per element
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = physical_point(geo, rule.points[q]);
      const double w = rule.weights[q] * 2.0 * geo.area;
      const double dv = eval_scalar(f, el, rule.points[q]) - exact(x[0], x[1], t);
      const Vec2 ge = exact_grad(x[0], x[1], t);
      const Vec2 dg = {gh[0] - ge[0], gh[1] - ge[1]};
      l2sq += w * dv * dv;
      semisq += w * dot(dg, dg);
    }
  }
  return {std::sqrt(l2sq), std::sqrt(l2sq + semisq), std::sqrt(semisq)};
}

ErrorNorms error_norms(const CoefficientVector& f, const VectorField& exact,
                       const VectorGradField& exact_grad, double t) {
  const FeSpace& space = *f.space;
  if (space.family() != Family::P2Vector2)
    throw std::invalid_argument("error_norms: vector exact data requires a P2 vector space");
  const QuadratureRule& rule = quadrature_rule(6);
  const Mesh& mesh = space.mesh();

  double l2sq = 0.0, semisq = 0.0;
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = physical_point(geo, rule.points[q]);
      const double w = rule.weights[q] * 2.0 * geo.area;
      const Vec2 vh = eval_vector(f, el, rule.points[q]);
      const Vec2 ve = exact(x[0], x[1], t);
      const Mat2 gh = eval_vector_grad(f, el, geo, rule.points[q]);
      const Mat2 ge = exact_grad(x[0], x[1], t);
      l2sq += w * ((vh[0] - ve[0]) * (vh[0] - ve[0]) + (vh[1] - ve[1]) * (vh[1] - ve[1]));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) semisq += w * (gh[i][j] - ge[i][j]) * (gh[i][j] - ge[i][j]);
    }
  }
  return {std::sqrt(l2sq), std::sqrt(l2sq + semisq), std::sqrt(semisq)};
}

double l2_difference(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.space != b.space) throw std::invalid_argument("l2_difference: fields on different spaces");
  const FeSpace& space = *a.space;
  const QuadratureRule& rule = quadrature_rule(4);
  const Mesh& mesh = space.mesh();
  double l2sq = 0.0;
  for (int el = 0; el < mesh.n_triangles(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * 2.0 * geo.area;
      if (space.family() == Family::P1Scalar) {
        const double d = eval_scalar(a, el, rule.points[q]) - eval_scalar(b, el, rule.points[q]);
        l2sq += w * d * d;
      } else {
        const Vec2 va = eval_vector(a, el, rule.points[q]);
        const Vec2 vb = eval_vector(b, el, rule.points[q]);
        l2sq += w * ((va[0] - vb[0]) * (va[0] - vb[0]) + (va[1] - vb[1]) * (va[1] - vb[1]));
      }
    }
  }
  return std::sqrt(l2sq);
}

}  // namespace biotsim
