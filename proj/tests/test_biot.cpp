#include <cmath>

#include "biotsim/biot.hpp"
#include "biotsim/error_norms.hpp"
#include "biotsim/manufactured.hpp"
#include "biotsim/stepping.hpp"
#include "doctest.h"
#include "support/dense_oracle.hpp"

using namespace biotsim;

TEST_CASE("Lame constants from E and nu") {
  {
    const auto [lambda, mu] = lame_from_E_nu(1000.0, 0.3);
    CHECK(lambda == doctest::Approx(576.923).epsilon(1e-5));
    CHECK(mu == doctest::Approx(384.615).epsilon(1e-5));
  }
  {
    const auto [lambda, mu] = lame_from_E_nu(9010.0, 0.35);
    CHECK(mu == doctest::Approx(3337.0).epsilon(2e-4));
    CHECK(1.0 / lambda == doctest::Approx(1.28e-4).epsilon(5e-3));
  }
  {
    const auto [lambda, mu] = lame_from_E_nu(9010.0, 0.499);
    CHECK(mu == doctest::Approx(3005.0).epsilon(2e-4));
    CHECK(1.0 / lambda == doctest::Approx(6.67e-7).epsilon(5e-3));
  }
  CHECK_THROWS_AS(lame_from_E_nu(1000.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(lame_from_E_nu(1000.0, 0.6), std::domain_error);
  CHECK_THROWS_AS(lame_from_E_nu(1000.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(lame_from_E_nu(-1.0, 0.3), std::domain_error);
}

TEST_CASE("1/lambda decreases towards the incompressible limit") {
  double prev = 1.0 / lame_from_E_nu(1000.0, 0.3).first;
  for (double nu : {0.4, 0.45, 0.49, 0.499}) {
    const double inv_lambda = 1.0 / lame_from_E_nu(1000.0, nu).first;
    CHECK(inv_lambda < prev);
    CHECK(inv_lambda > 0.0);
    prev = inv_lambda;
  }
}

namespace {

TransientState manufactured_initial(const FeSpace& u_space, const FeSpace& scalar_space,
                                    const ManufacturedCase& mc) {
  auto u0 = [&mc](double x, double y, double t) { return mc.exact_u(x, y, t); };
  auto p0 = [&mc](double x, double y, double t) { return mc.exact_p(x, y, t); };
  return make_initial_state(u_space, scalar_space, mc.material,
                            InitialCondition::interpolate_exact(u0, p0));
}

}  // namespace

TEST_CASE("total pressure initialisation") {
  const Mesh mesh = unit_square_mesh(3);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const BiotMaterial mat = BiotMaterial::make(1000.0, 0.3, 1.0, 1.0, 1.0, 1.0);

  SUBCASE("zero data gives zero total pressure") {
    const CoefficientVector u0(u_space);
    const CoefficientVector p0(scalar_space);
    const CoefficientVector xi0 = total_pressure_init(u0, p0, mat);
    for (double v : xi0.values) CHECK(std::abs(v) <= 1e-14);
  }

  SUBCASE("with zero displacement the projection is the identity on P1") {
    const CoefficientVector u0(u_space);
    const CoefficientVector p0 =
        interpolate(scalar_space, [](double x, double y, double) { return x * x - 3.0 * y; }, 0.0);
    const CoefficientVector xi0 = total_pressure_init(u0, p0, mat);
    for (int i = 0; i < scalar_space.n_dofs(); ++i)
      CHECK(xi0.values[i] == doctest::Approx(p0.values[i]).epsilon(1e-12));
  }

  SUBCASE("benchmark data satisfies the weak definition of xi0") {
    const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
    const TransientState state = manufactured_initial(u_space, scalar_space, mc);

    // (xi0, psi_i) == (alpha p0 - lambda div u0, psi_i) for every P1 basis
    const QuadratureRule& rule = quadrature_rule(4);
    std::vector<double> lhs(scalar_space.n_dofs(), 0.0), rhs(scalar_space.n_dofs(), 0.0);
    for (int el = 0; el < mesh.n_triangles(); ++el) {
      const ElementGeometry geo = element_geometry(mesh, el);
      const auto nodes = scalar_space.element_nodes(el);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const double w = rule.weights[q] * 2.0 * geo.area;
        const auto shape = p1_shape(rule.points[q]);
        const double xi_h = eval_scalar(state.xi, el, rule.points[q]);
        const double target = mc.material.alpha * eval_scalar(state.p, el, rule.points[q]) -
                              mc.material.lambda * eval_vector_div(state.u, el, geo, rule.points[q]);
        for (int i = 0; i < 3; ++i) {
          lhs[nodes[i]] += w * xi_h * shape[i];
          rhs[nodes[i]] += w * target * shape[i];
        }
      }
    }
    double scale = 0.0;
    for (double v : rhs) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < scalar_space.n_dofs(); ++i)
      CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-10 * scale);
  }
}

TEST_CASE("pressure recovery inverts the total-pressure substitution") {
  const Mesh mesh = unit_square_mesh(4);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const TransientState state = manufactured_initial(u_space, scalar_space, mc);

  const CoefficientVector recovered = recover_pressure(state.xi, state.u, mc.material);
  for (int i = 0; i < scalar_space.n_dofs(); ++i)
    CHECK(recovered.values[i] == doctest::Approx(state.p.values[i]).epsilon(1e-10));

  const CoefficientVector zero_u(u_space);
  const CoefficientVector from_xi = recover_pressure(state.xi, zero_u, mc.material);
  for (int i = 0; i < scalar_space.n_dofs(); ++i)
    CHECK(from_xi.values[i] ==
          doctest::Approx(state.xi.values[i] / mc.material.alpha).epsilon(1e-10));
}

TEST_CASE("coupled matrix matches the dense oracle entry by entry") {
  const Mesh mesh = unit_square_mesh(1);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const double dt = 1e-5;
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, dt, mc.data());
  const oracle::DenseMatrix ref = oracle::coupled_matrix(mesh, mc.material, 1.0 / dt, mc.data());

  REQUIRE(sys.layout.total == ref.n);
  double max_entry = 0.0;
  for (double v : ref.a) max_entry = std::max(max_entry, std::abs(v));
  for (int r = 0; r < ref.n; ++r)
    for (int c = 0; c < ref.n; ++c)
      CHECK(std::abs(sys.raw_matrix.coeff(r, c) - ref.at(r, c)) <= 1e-12 * max_entry);
}

TEST_CASE("assembled matrices are time-invariant and reproducible") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.499, 1e-6);
  const CoupledSystem a =
      assemble_coupled_system(u_space, scalar_space, mc.material, 1e-5, mc.data());
  const CoupledSystem b =
      assemble_coupled_system(u_space, scalar_space, mc.material, 1e-5, mc.data());
  CHECK(a.raw_matrix.equal_values(b.raw_matrix));
  CHECK(a.matrix.equal_values(b.matrix));
  CHECK(a.mass_p1.equal_values(b.mass_p1));
}

TEST_CASE("elastic block annihilates rigid translations") {
  const Mesh mesh = refine_uniform(unit_square_mesh(2));
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, 1e-5, mc.data());

  std::vector<double> x(sys.layout.total, 0.0);
  const CoefficientVector c = interpolate(
      u_space, [](double, double, double) -> Vec2 { return {0.7, -0.3}; }, 0.0);
  std::copy(c.values.begin(), c.values.end(), x.begin());

  const std::vector<double> ax = sys.raw_matrix.multiply(x);
  const double bound = 1e-10 * sys.raw_matrix.max_abs() * 0.7;
  for (int i = 0; i < sys.layout.n_u; ++i) CHECK(std::abs(ax[i]) <= bound);
}

TEST_CASE("scaling the pressure rows by -dt symmetrises the coupled matrix") {
  const Mesh mesh = unit_square_mesh(1);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const double dt = 1e-5;
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, dt, mc.data());

  const int n = sys.layout.total;
  std::vector<double> dense(static_cast<size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    const double scale = r >= sys.layout.off_p ? -dt : 1.0;
    const auto cols = sys.raw_matrix.row_cols(r);
    const auto vals = sys.raw_matrix.row_values(r);
    for (size_t k = 0; k < cols.size(); ++k)
      dense[static_cast<size_t>(r) * n + cols[k]] = scale * vals[k];
  }
  double max_entry = 0.0;
  for (double v : dense) max_entry = std::max(max_entry, std::abs(v));
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      CHECK(std::abs(dense[static_cast<size_t>(r) * n + c] -
                     dense[static_cast<size_t>(c) * n + r]) <= 1e-12 * max_entry);
}

TEST_CASE("zero data keeps a zero state") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const BiotMaterial mat = BiotMaterial::make(1000.0, 0.3, 1.0, 1.0, 1.0, 1.0);
  ProblemData data;
  data.dirichlet_u_tags = {1, 2, 3, 4};

  const CoupledSystem sys = assemble_coupled_system(u_space, scalar_space, mat, 1e-3, data);
  TransientState state;
  state.u = CoefficientVector(u_space);
  state.xi = CoefficientVector(scalar_space);
  state.p = CoefficientVector(scalar_space);

  const std::vector<double> rhs = assemble_coupled_rhs(sys, state, data, 1e-3, 1e-3);
  for (double v : rhs) CHECK(v == 0.0);

  const Factorization fact(sys.matrix);
  const TransientState next = coupled_step(state, fact, sys, data, 1e-3);
  for (double v : next.u.values) CHECK(std::abs(v) <= 1e-14);
  for (double v : next.xi.values) CHECK(std::abs(v) <= 1e-14);
  for (double v : next.p.values) CHECK(std::abs(v) <= 1e-14);

  const DecoupledSystem dsys = assemble_decoupled_system(u_space, scalar_space, mat, 1e-3, data);
  const Factorization sf(dsys.stokes_matrix);
  const Factorization df(dsys.diffusion_matrix);
  const TransientState dnext = decoupled_step(state, sf, df, dsys, data, 1e-3);
  for (double v : dnext.u.values) CHECK(std::abs(v) <= 1e-14);
  for (double v : dnext.p.values) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("region-restricted sources integrate to rate times region area") {
  Mesh mesh = unit_square_mesh(2);
  mesh.triangle_region[0] = 1;
  mesh.triangle_region[5] = 1;
  const double injured_area = mesh.triangle_area(0) + mesh.triangle_area(5);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const BiotMaterial mat = BiotMaterial::make(1000.0, 0.3, 1.0, 1.0, 1.0, 1.0);

  const double q = 2.75;
  ProblemData data;
  data.dirichlet_u_tags = {1, 2, 3, 4};
  data.source = [q](double, double, double) { return q; };
  data.source_region = 1;

  const CoupledSystem sys = assemble_coupled_system(u_space, scalar_space, mat, 1e-3, data);
  TransientState state;
  state.u = CoefficientVector(u_space);
  state.xi = CoefficientVector(scalar_space);
  state.p = CoefficientVector(scalar_space);
  const std::vector<double> rhs = assemble_coupled_rhs(sys, state, data, 1e-3, 1e-3);

  double total = 0.0;
  for (int i = 0; i < sys.layout.n_scalar; ++i) total += rhs[sys.layout.off_p + i];
  CHECK(total == doctest::Approx(q * injured_area).epsilon(1e-12));
}

TEST_CASE("benchmark load vector matches the dense quadrature oracle") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const ProblemData data = mc.data();
  const double dt = 1e-5;

  const TransientState state = manufactured_initial(u_space, scalar_space, mc);
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, dt, data);
  const std::vector<double> rhs = assemble_coupled_rhs(sys, state, data, dt, dt);
  const std::vector<double> ref =
      oracle::coupled_rhs(mesh, mc.material, dt, data, state.xi.values, state.p.values, dt, dt);

  REQUIRE(rhs.size() == ref.size());
  double scale = 0.0;
  for (double v : ref) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < rhs.size(); ++i) CHECK(std::abs(rhs[i] - ref[i]) <= 1e-12 * scale);
}

TEST_CASE("one step of each algorithm matches the dense oracle") {
  for (int n : {1, 2}) {
    CAPTURE(n);
    const Mesh mesh = unit_square_mesh(n);
    const FeSpace u_space(mesh, Family::P2Vector2);
    const FeSpace scalar_space(mesh, Family::P1Scalar);
    const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
    const ProblemData data = mc.data();
    const double dt = 1e-5;
    const TransientState state = manufactured_initial(u_space, scalar_space, mc);

    auto check_close = [](const std::vector<double>& got, const std::vector<double>& ref) {
      REQUIRE(got.size() == ref.size());
      double scale = 0.0;
      for (double v : ref) scale = std::max(scale, std::abs(v));
      for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-10 * scale);
    };

    {
      const CoupledSystem sys =
          assemble_coupled_system(u_space, scalar_space, mc.material, dt, data);
      const Factorization fact(sys.matrix);
      const TransientState next = coupled_step(state, fact, sys, data, dt);
      const oracle::StepResult ref = oracle::coupled_step(
          mesh, mc.material, dt, data, state.u.values, state.xi.values, state.p.values, dt, dt);
      check_close(next.u.values, ref.u);
      check_close(next.xi.values, ref.xi);
      check_close(next.p.values, ref.p);
    }
    {
      const DecoupledSystem sys =
          assemble_decoupled_system(u_space, scalar_space, mc.material, dt, data);
      const Factorization sf(sys.stokes_matrix);
      const Factorization df(sys.diffusion_matrix);
      const TransientState next = decoupled_step(state, sf, df, sys, data, dt);
      const oracle::StepResult ref = oracle::decoupled_step(
          mesh, mc.material, dt, data, state.u.values, state.xi.values, state.p.values, dt, dt);
      check_close(next.u.values, ref.u);
      check_close(next.xi.values, ref.xi);
      check_close(next.p.values, ref.p);
    }
  }
}

namespace {

// integral of (c0 + alpha^2/lambda) p - (alpha/lambda) xi over the domain
double mass_content(const SparseMatrix& mass, const BiotMaterial& mat,
                    const TransientState& state) {
  const double storage = mat.c0 + mat.alpha * mat.alpha / mat.lambda;
  const std::vector<double> mp = mass.multiply(state.p.values);
  const std::vector<double> mxi = mass.multiply(state.xi.values);
  double total = 0.0;
  for (size_t i = 0; i < mp.size(); ++i)
    total += storage * mp[i] - mat.alpha / mat.lambda * mxi[i];
  return total;
}

}  // namespace

TEST_CASE("pure-Neumann runs conserve the fluid content functional") {
  const Mesh mesh = unit_square_mesh(4);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const BiotMaterial mat = BiotMaterial::make(1000.0, 0.3, 1.0, 1.0, 1.0, 1.0);

  ProblemData data;
  data.dirichlet_u_tags = {1, 2, 3, 4};  // clamp u, leave p pure Neumann

  TransientState state;
  state.t = 0.0;
  state.u = CoefficientVector(u_space);
  state.p = interpolate(scalar_space, [](double x, double y, double) { return std::sin(x + y); },
                        0.0);
  state.xi = total_pressure_init(state.u, state.p, mat);

  const double dt = 1e-3;
  const CoupledSystem sys = assemble_coupled_system(u_space, scalar_space, mat, dt, data);
  const Factorization fact(sys.matrix);

  const double initial = mass_content(sys.mass_p1, mat, state);
  for (int n = 0; n < 10; ++n) {
    state = coupled_step(state, fact, sys, data, dt);
    CHECK(std::abs(mass_content(sys.mass_p1, mat, state) - initial) <=
          1e-10 * std::abs(initial));
  }
}

TEST_CASE("splitting error of a single step is first order in dt") {
  const Mesh mesh = unit_square_mesh(4);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const ProblemData data = mc.data();
  const TransientState state = manufactured_initial(u_space, scalar_space, mc);

  auto discrepancy = [&](double dt) {
    const CoupledSystem csys =
        assemble_coupled_system(u_space, scalar_space, mc.material, dt, data);
    const Factorization cf(csys.matrix);
    const TransientState cnext = coupled_step(state, cf, csys, data, dt);

    const DecoupledSystem dsys =
        assemble_decoupled_system(u_space, scalar_space, mc.material, dt, data);
    const Factorization sf(dsys.stokes_matrix);
    const Factorization df(dsys.diffusion_matrix);
    const TransientState dnext = decoupled_step(state, sf, df, dsys, data, dt);
    return l2_difference(cnext.p, dnext.p);
  };

  const double d1 = discrepancy(1e-5);
  const double d2 = discrepancy(5e-6);
  CHECK(d1 > 0.0);
  const double ratio = d2 / d1;
  CHECK(ratio >= 0.4);
  CHECK(ratio <= 0.6);
}

TEST_CASE("run_transient honours the step count contract") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);

  auto u0 = [&mc](double x, double y, double t) { return mc.exact_u(x, y, t); };
  auto p0 = [&mc](double x, double y, double t) { return mc.exact_p(x, y, t); };
  const InitialCondition initial = InitialCondition::interpolate_exact(u0, p0);

  TransientOptions opts;
  opts.algorithm = Algorithm::Coupled;
  opts.dt = 1e-5;
  opts.t_end = 0.0;
  Trajectory traj = run_transient(u_space, scalar_space, mc.material, mc.data(), opts, initial);
  CHECK(traj.steps == 0);
  CHECK(traj.final.t == 0.0);

  opts.t_end = 1e-3;
  int observed = 0;
  opts.observer = [&observed](const TransientState&) { ++observed; };
  traj = run_transient(u_space, scalar_space, mc.material, mc.data(), opts, initial);
  CHECK(traj.steps == 100);
  CHECK(observed == 101);  // initial state plus every step
  CHECK(traj.final.t == doctest::Approx(1e-3).epsilon(1e-12));

  opts.dt = 1e-6;
  opts.observer = nullptr;
  traj = run_transient(u_space, scalar_space, mc.material, mc.data(), opts, initial);
  CHECK(traj.steps == 1000);
}

TEST_CASE("missing boundary tags are reported") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const BiotMaterial mat = BiotMaterial::make(1000.0, 0.3, 1.0, 1.0, 1.0, 1.0);
  ProblemData data;
  data.dirichlet_u_tags = {7};
  CHECK_THROWS_WITH_AS(assemble_coupled_system(u_space, scalar_space, mat, 1e-3, data),
                       doctest::Contains("missing boundary tag 7"), std::invalid_argument);
}
