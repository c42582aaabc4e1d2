#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace biotsim {

using Vec2 = std::array<double, 2>;
// Row-major small matrix; for gradients m[i][j] = d(component i)/d(x_j).
using Mat2 = std::array<std::array<double, 2>, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

// Analytic fields of (x, y, t).
using ScalarField = std::function<double(double, double, double)>;
using VectorField = std::function<Vec2(double, double, double)>;
using GradField = std::function<Vec2(double, double, double)>;
using VectorGradField = std::function<Mat2(double, double, double)>;

// Boundary data that depends on the outward unit normal.
using BoundaryScalarField = std::function<double(double, double, double, const Vec2&)>;
using BoundaryVectorField = std::function<Vec2(double, double, double, const Vec2&)>;

}  // namespace biotsim
