#include "biotsim/quadrature.hpp"

#include <stdexcept>

namespace biotsim {

namespace {

// Appends the orbit of (a, b, b) under coordinate permutation.
void add_orbit3(QuadratureRule& rule, double a, double b, double w) {
  rule.points.push_back({a, b, b});
  rule.points.push_back({b, a, b});
  rule.points.push_back({b, b, a});
  rule.weights.insert(rule.weights.end(), 3, w);
}

// Appends all six permutations of (a, b, c).
void add_orbit6(QuadratureRule& rule, double a, double b, double c, double w) {
  rule.points.push_back({a, b, c});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, a, c});
  rule.points.push_back({b, c, a});
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  rule.weights.insert(rule.weights.end(), 6, w);
}

QuadratureRule make_rule(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(1.0);
      break;
    case 2:
      add_orbit3(rule, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:  // degree-4 rule reused; avoids the negative-weight 4-point rule
    case 4:
      add_orbit3(rule, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      add_orbit3(rule, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      break;
    case 5:
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.225);
      add_orbit3(rule, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      add_orbit3(rule, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      break;
    case 6:
      add_orbit3(rule, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      add_orbit3(rule, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      add_orbit6(rule, 0.636502499121399, 0.310352451033785, 0.053145049844816,
                 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("quadrature_rule: unsupported degree " +
                                  std::to_string(degree));
  }
  for (double& w : rule.weights) w *= 0.5;  // scale to reference-triangle area
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("quadrature_rule: unsupported degree " + std::to_string(degree));
  static const QuadratureRule rules[6] = {make_rule(1), make_rule(2), make_rule(3),
                                          make_rule(4), make_rule(5), make_rule(6)};
  return rules[degree - 1];
}

const EdgeQuadrature& edge_quadrature() {
  // 4-point Gauss-Legendre mapped to [0,1], exact to degree 7.
  static const EdgeQuadrature rule = [] {
    EdgeQuadrature q;
    const double a = 0.339981043584856;  // Legendre roots on (-1,1)
    const double b = 0.861136311594053;
    const double wa = 0.652145154862546;
    const double wb = 0.347854845137454;
    q.points = {0.5 * (1 - b), 0.5 * (1 - a), 0.5 * (1 + a), 0.5 * (1 + b)};
    q.weights = {0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb};
    return q;
  }();
  return rule;
}

}  // namespace biotsim
