#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "biotsim/fe_space.hpp"
#include "biotsim/sparse.hpp"

namespace biotsim {

// Lame constants from Young's modulus and Poisson ratio.
// Returns (lambda, mu); throws std::domain_error outside 0 < nu < 0.5.
std::pair<double, double> lame_from_E_nu(double E, double nu);

struct BiotMaterial {
  double E = 0.0;      // Young's modulus [Pa]
  double nu = 0.0;     // Poisson ratio
  double alpha = 1.0;  // Biot-Willis coefficient
  double c0 = 0.0;     // constrained specific storage [1/Pa]
  double kappa = 0.0;  // permeability [length^2]
  double mu_f = 1.0;   // fluid viscosity [Pa*time]

  double lambda = 0.0;  // derived
  double mu = 0.0;      // derived
  double K = 0.0;       // hydraulic conductivity kappa/mu_f

  static BiotMaterial make(double E, double nu, double alpha, double c0, double kappa,
                           double mu_f);
};

struct RobinData {
  int tag = 0;
  double conductance = 0.0;       // c_b
  double external_pressure = 0.0; // p_SAS
};

// Loads and boundary data for one scenario. Null std::function means zero.
struct ProblemData {
  VectorField body_force;  // f
  ScalarField source;      // Q_s
  int source_region = -1;  // restrict Q_s to this region tag, -1 = everywhere

  std::vector<int> traction_tags;  // Gamma_t
  BoundaryVectorField traction;    // h
  std::vector<int> flux_tags;      // Gamma_f
  BoundaryScalarField flux;        // g2 = K grad(p) . n
  std::optional<RobinData> robin;

  std::vector<int> dirichlet_u_tags;  // Gamma_d
  VectorField dirichlet_u;
  std::vector<int> dirichlet_p_tags;  // Gamma_p
  ScalarField dirichlet_p;
};

// Discrete solution at one time level.
struct TransientState {
  double t = 0.0;
  CoefficientVector u;   // P2 vector displacement
  CoefficientVector xi;  // P1 total pressure
  CoefficientVector p;   // P1 fluid pressure
};

enum class LoadTimeLevel { Next, Current };

struct BlockLayout {
  int n_u = 0;
  int n_scalar = 0;
  int off_u = 0;
  int off_xi = 0;
  int off_p = 0;
  int total = 0;
};

// Monolithic operator over (u, xi, p). All bilinear forms are
// time-invariant, so the matrix is assembled and factorized once per run;
// inv_dt = 0 gives the steady operator (time-derivative terms removed).
struct CoupledSystem {
  const FeSpace* u_space = nullptr;
  const FeSpace* scalar_space = nullptr;
  BiotMaterial mat;
  double inv_dt = 0.0;

  BlockLayout layout;
  SparseMatrix matrix;      // after symmetric Dirichlet elimination
  SparseMatrix raw_matrix;  // before elimination (lifting, diagnostics)
  SparseMatrix mass_p1;     // scalar mass, used for the history terms
  std::vector<unsigned char> constrained;  // mask over all DOFs
};

CoupledSystem assemble_coupled_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                      const BiotMaterial& mat, double dt,
                                      const ProblemData& data);
CoupledSystem assemble_coupled_steady_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                             const BiotMaterial& mat, const ProblemData& data);

// Load vector for the step to time t_next, including history terms from
// `prev`, boundary loads at load_time, and Dirichlet lifting at t_next.
std::vector<double> assemble_coupled_rhs(const CoupledSystem& sys, const TransientState& prev,
                                         const ProblemData& data, double t_next,
                                         double load_time);

TransientState coupled_step(const TransientState& state, const Factorization& fact,
                            const CoupledSystem& sys, const ProblemData& data, double dt,
                            LoadTimeLevel load_level = LoadTimeLevel::Next);

// Split operator: a generalized Stokes block over (u, xi) driven by the
// lagged pressure, then a reaction-diffusion block for p.
struct DecoupledSystem {
  const FeSpace* u_space = nullptr;
  const FeSpace* scalar_space = nullptr;
  BiotMaterial mat;
  double inv_dt = 0.0;

  BlockLayout stokes_layout;  // u then xi
  SparseMatrix stokes_matrix;
  SparseMatrix stokes_raw_matrix;
  std::vector<unsigned char> stokes_constrained;

  SparseMatrix diffusion_matrix;
  SparseMatrix diffusion_raw_matrix;
  std::vector<unsigned char> diffusion_constrained;

  SparseMatrix mass_p1;
};

DecoupledSystem assemble_decoupled_system(const FeSpace& u_space, const FeSpace& scalar_space,
                                          const BiotMaterial& mat, double dt,
                                          const ProblemData& data);

TransientState decoupled_step(const TransientState& state, const Factorization& stokes_fact,
                              const Factorization& diffusion_fact, const DecoupledSystem& sys,
                              const ProblemData& data, double dt,
                              LoadTimeLevel load_level = LoadTimeLevel::Next);

// L2 projection of alpha*p0 - lambda*div(u0) onto the scalar space; the
// consistent initial value for the total pressure.
CoefficientVector total_pressure_init(const CoefficientVector& u0, const CoefficientVector& p0,
                                      const BiotMaterial& mat);

// L2 projection of (xi + lambda*div(u))/alpha onto the scalar space.
// Consistency diagnostic; the steppers treat p as a primary unknown.
CoefficientVector recover_pressure(const CoefficientVector& xi, const CoefficientVector& u,
                                   const BiotMaterial& mat);

// Scalar mass matrix of a P1 space (shared by projections and tests).
SparseMatrix assemble_p1_mass(const FeSpace& scalar_space);

}  // namespace biotsim
