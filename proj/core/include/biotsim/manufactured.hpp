#pragma once

#include "biotsim/biot.hpp"

namespace biotsim {

// Benchmark problem on the unit square with the closed-form solution
//   u = (sin x, sin y) e^{-t},  p = sin(x+y) e^{-t},
// Dirichlet data for u and p on tags 1 and 3 (x=1, x=0), traction and
// pressure-flux data on tags 2 and 4 (y=0, y=1). E = 1000, c0 = 1,
// alpha = 1; the Poisson ratio and hydraulic conductivity vary per study.
struct ManufacturedCase {
  BiotMaterial material;
  double final_time = 1e-3;

  static ManufacturedCase make(double nu, double K);

  Vec2 exact_u(double x, double y, double t) const;
  Mat2 exact_grad_u(double x, double y, double t) const;
  double exact_p(double x, double y, double t) const;
  Vec2 exact_grad_p(double x, double y, double t) const;
  double exact_xi(double x, double y, double t) const;
  Vec2 exact_grad_xi(double x, double y, double t) const;

  // Loads and boundary data consistent with the exact solution; the flux
  // datum is g2 = K grad(p).n, the convention matching integration by
  // parts of -div(K grad p).
  ProblemData data() const;
};

}  // namespace biotsim
