#include "biotsim/manufactured.hpp"

#include <cmath>

namespace biotsim {

ManufacturedCase ManufacturedCase::make(double nu, double K) {
  ManufacturedCase mc;
  mc.material = BiotMaterial::make(1000.0, nu, 1.0, 1.0, K, 1.0);
  return mc;
}

Vec2 ManufacturedCase::exact_u(double x, double y, double t) const {
  const double et = std::exp(-t);
  return {std::sin(x) * et, std::sin(y) * et};
}

Mat2 ManufacturedCase::exact_grad_u(double x, double y, double t) const {
  const double et = std::exp(-t);
  return {{{std::cos(x) * et, 0.0}, {0.0, std::cos(y) * et}}};
}

double ManufacturedCase::exact_p(double x, double y, double t) const {
  return std::sin(x + y) * std::exp(-t);
}

Vec2 ManufacturedCase::exact_grad_p(double x, double y, double t) const {
  const double c = std::cos(x + y) * std::exp(-t);
  return {c, c};
}

double ManufacturedCase::exact_xi(double x, double y, double t) const {
  const double et = std::exp(-t);
  return material.alpha * std::sin(x + y) * et -
         material.lambda * (std::cos(x) + std::cos(y)) * et;
}

Vec2 ManufacturedCase::exact_grad_xi(double x, double y, double t) const {
  const double et = std::exp(-t);
  const double c = material.alpha * std::cos(x + y) * et;
  return {c + material.lambda * std::sin(x) * et, c + material.lambda * std::sin(y) * et};
}

ProblemData ManufacturedCase::data() const {
  const BiotMaterial m = material;
  ProblemData d;

  d.body_force = [m](double x, double y, double t) -> Vec2 {
    const double et = std::exp(-t);
    const double c = m.alpha * std::cos(x + y) * et;
    return {(m.lambda + 2.0 * m.mu) * std::sin(x) * et + c,
            (m.lambda + 2.0 * m.mu) * std::sin(y) * et + c};
  };
  d.source = [m](double x, double y, double t) {
    const double et = std::exp(-t);
    return (-m.c0 + 2.0 * m.K) * std::sin(x + y) * et -
           m.alpha * (std::cos(x) + std::cos(y)) * et;
  };

  d.dirichlet_u_tags = {1, 3};
  d.dirichlet_u = [](double x, double y, double t) -> Vec2 {
    const double et = std::exp(-t);
    return {std::sin(x) * et, std::sin(y) * et};
  };
  d.dirichlet_p_tags = {1, 3};
  d.dirichlet_p = [](double x, double y, double t) { return std::sin(x + y) * std::exp(-t); };

  d.traction_tags = {2, 4};
  d.traction = [m](double x, double y, double t, const Vec2& n) -> Vec2 {
    const double et = std::exp(-t);
    const double diag = m.lambda * (std::cos(x) + std::cos(y)) - m.alpha * std::sin(x + y);
    return {2.0 * m.mu * std::cos(x) * et * n[0] + diag * et * n[0],
            2.0 * m.mu * std::cos(y) * et * n[1] + diag * et * n[1]};
  };
  d.flux_tags = {2, 4};
  d.flux = [m](double x, double y, double t, const Vec2& n) {
    return m.K * std::cos(x + y) * std::exp(-t) * (n[0] + n[1]);
  };
  return d;
}

}  // namespace biotsim
