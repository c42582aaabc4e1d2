#pragma once

#include "biotsim/fe_space.hpp"

namespace biotsim {

// L2 and H1 errors of a discrete field against an analytic exact solution,
// integrated with the degree-6 rule. h1 is the full norm
// sqrt(l2^2 + h1_semi^2); the seminorm is reported alongside.
struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double h1_semi = 0.0;
};

ErrorNorms error_norms(const CoefficientVector& f, const ScalarField& exact,
                       const GradField& exact_grad, double t);
ErrorNorms error_norms(const CoefficientVector& f, const VectorField& exact,
                       const VectorGradField& exact_grad, double t);

// L2 norm of the difference of two fields on the same space.
double l2_difference(const CoefficientVector& a, const CoefficientVector& b);

}  // namespace biotsim
