#pragma once

#include <functional>

#include "biotsim/biot.hpp"

namespace biotsim {

enum class Algorithm { Coupled, Decoupled };

enum class InitialKind { InterpolateExact, ZeroDisplacement, Custom };

struct InitialCondition {
  InitialKind kind = InitialKind::InterpolateExact;
  VectorField u0;  // used by InterpolateExact
  ScalarField p0;  // used by InterpolateExact and ZeroDisplacement
  TransientState custom;

  static InitialCondition interpolate_exact(VectorField u0, ScalarField p0);
  static InitialCondition zero_displacement(ScalarField p0);
  static InitialCondition from_state(TransientState state);
};

struct TransientOptions {
  Algorithm algorithm = Algorithm::Coupled;
  double dt = 0.0;
  double t_end = 0.0;
  LoadTimeLevel load_level = LoadTimeLevel::Next;
  int sample_stride = 0;  // keep every k-th state; 0 keeps none
  std::function<void(const TransientState&)> observer;
};

struct Trajectory {
  std::vector<TransientState> samples;
  TransientState final;
  int steps = 0;
};

// Backward-Euler time marching with the chosen algorithm. The number of
// steps is round(t_end/dt); a warning is printed when t_end is not an
// integer multiple of dt. All factorizations are computed once.
Trajectory run_transient(const FeSpace& u_space, const FeSpace& scalar_space,
                         const BiotMaterial& mat, const ProblemData& data,
                         const TransientOptions& options, const InitialCondition& initial);

// Steady solution of the coupled system (time-derivative terms removed).
TransientState solve_steady(const FeSpace& u_space, const FeSpace& scalar_space,
                            const BiotMaterial& mat, const ProblemData& data);

// Builds the discrete initial state (u, p interpolated or zero, xi projected).
TransientState make_initial_state(const FeSpace& u_space, const FeSpace& scalar_space,
                                  const BiotMaterial& mat, const InitialCondition& initial);

}  // namespace biotsim
