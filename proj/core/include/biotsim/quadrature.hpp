#pragma once

#include <vector>

namespace biotsim {

// Quadrature on the reference triangle, stored in barycentric coordinates.
// Weights sum to 1/2 (the reference area), so an element integral is
// sum_q w_q * f(x_q) * (2 * area).
struct QuadratureRule {
  struct Point {
    double l0, l1, l2;
  };
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;  // declared polynomial exactness
};

// Rule exact for all bivariate polynomials up to `degree`, 1 <= degree <= 6.
const QuadratureRule& quadrature_rule(int degree);

// Gauss rule on [0,1] for boundary-edge integrals; weights sum to 1.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
};
const EdgeQuadrature& edge_quadrature();

}  // namespace biotsim
