#include "biotsim/stepping.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace biotsim {

InitialCondition InitialCondition::interpolate_exact(VectorField u0, ScalarField p0) {
  InitialCondition ic;
  ic.kind = InitialKind::InterpolateExact;
  ic.u0 = std::move(u0);
  ic.p0 = std::move(p0);
  return ic;
}

InitialCondition InitialCondition::zero_displacement(ScalarField p0) {
  InitialCondition ic;
  ic.kind = InitialKind::ZeroDisplacement;
  ic.p0 = std::move(p0);
  return ic;
}

InitialCondition InitialCondition::from_state(TransientState state) {
  InitialCondition ic;
  ic.kind = InitialKind::Custom;
  ic.custom = std::move(state);
  return ic;
}

TransientState make_initial_state(const FeSpace& u_space, const FeSpace& scalar_space,
                                  const BiotMaterial& mat, const InitialCondition& initial) {
  if (initial.kind == InitialKind::Custom) return initial.custom;

  TransientState state;
  state.t = 0.0;
  state.u = initial.kind == InitialKind::InterpolateExact && initial.u0
                ? interpolate(u_space, initial.u0, 0.0)
                : CoefficientVector(u_space);
  state.p = initial.p0 ? interpolate(scalar_space, initial.p0, 0.0)
                       : CoefficientVector(scalar_space);
  state.xi = total_pressure_init(state.u, state.p, mat);
  return state;
}

Trajectory run_transient(const FeSpace& u_space, const FeSpace& scalar_space,
                         const BiotMaterial& mat, const ProblemData& data,
                         const TransientOptions& options, const InitialCondition& initial) {
  if (!(options.dt > 0.0)) throw std::invalid_argument("run_transient: dt must be positive");
  if (options.t_end < 0.0) throw std::invalid_argument("run_transient: t_end must be >= 0");

  const long steps = std::lround(options.t_end / options.dt);
  if (std::abs(steps * options.dt - options.t_end) > 1e-12 * std::max(options.t_end, 1.0))
    std::cerr << "run_transient: t_end (" << options.t_end << ") is not a multiple of dt ("
              << options.dt << "), running " << steps << " steps\n";

  Trajectory traj;
  traj.final = make_initial_state(u_space, scalar_space, mat, initial);
  traj.steps = static_cast<int>(steps);
  if (options.observer) options.observer(traj.final);
  if (options.sample_stride > 0) traj.samples.push_back(traj.final);

  if (steps == 0) return traj;

  if (options.algorithm == Algorithm::Coupled) {
    const CoupledSystem sys = assemble_coupled_system(u_space, scalar_space, mat, options.dt, data);
    const Factorization fact(sys.matrix);
    for (long n = 0; n < steps; ++n) {
      traj.final = coupled_step(traj.final, fact, sys, data, options.dt, options.load_level);
      if (options.observer) options.observer(traj.final);
      if (options.sample_stride > 0 && (n + 1) % options.sample_stride == 0)
        traj.samples.push_back(traj.final);
    }
  } else {
    const DecoupledSystem sys =
        assemble_decoupled_system(u_space, scalar_space, mat, options.dt, data);
    const Factorization stokes_fact(sys.stokes_matrix);
    const Factorization diffusion_fact(sys.diffusion_matrix);
    for (long n = 0; n < steps; ++n) {
      traj.final = decoupled_step(traj.final, stokes_fact, diffusion_fact, sys, data, options.dt,
                                  options.load_level);
      if (options.observer) options.observer(traj.final);
      if (options.sample_stride > 0 && (n + 1) % options.sample_stride == 0)
        traj.samples.push_back(traj.final);
    }
  }
  return traj;
}

TransientState solve_steady(const FeSpace& u_space, const FeSpace& scalar_space,
                            const BiotMaterial& mat, const ProblemData& data) {
  const CoupledSystem sys = assemble_coupled_steady_system(u_space, scalar_space, mat, data);
  const Factorization fact(sys.matrix);
  TransientState dummy;  // no history terms in the steady operator
  const std::vector<double> rhs = assemble_coupled_rhs(sys, dummy, data, 0.0, 0.0);
  const std::vector<double> x = fact.solve(rhs);

  TransientState state;
  state.t = 0.0;
  state.u = CoefficientVector(u_space);
  state.xi = CoefficientVector(scalar_space);
  state.p = CoefficientVector(scalar_space);
  std::copy_n(x.begin() + sys.layout.off_u, sys.layout.n_u, state.u.values.begin());
  std::copy_n(x.begin() + sys.layout.off_xi, sys.layout.n_scalar, state.xi.values.begin());
  std::copy_n(x.begin() + sys.layout.off_p, sys.layout.n_scalar, state.p.values.begin());
  return state;
}

}  // namespace biotsim
