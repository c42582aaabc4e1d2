#pragma once

#include <iosfwd>
#include <vector>

#include "biotsim/stepping.hpp"

namespace biotsim {

// Brain-edema scenario in mm / min / Pa units. Baseline values follow the
// published parameter set for poroelastic brain tissue.
struct EdemaConfig {
  BiotMaterial material;       // E=9010 Pa, nu=0.35, alpha=1, c0=4.5e-7/Pa,
                               // kappa=1.4e-9 mm^2, mu_f=1.48e-5 Pa*min
  double c_b = 3e-5;           // boundary conductance, mm/(min*Pa)
  double p_sas = 1070.0;       // subarachnoid pressure, Pa
  double p_vent = 1100.0;      // ventricular pressure, Pa
  double q_injured = 9e-3;     // CSF absorption rate density on the injured region
  double dt = 1.0;             // minutes
  double t_max = 3000.0;       // minutes
  double plateau_tol = 1e-6;   // relative per-step change that ends the run
  Algorithm algorithm = Algorithm::Coupled;

  static EdemaConfig baseline();
};

// c_b = Q0 / (p_d * A_SAS); Q0 in mm^3/min (1 ml = 1000 mm^3), p_d in Pa,
// A_SAS in mm^2.
double conductance(double Q0, double p_d, double A_sas);

// Boundary and load data for the edema scenario: clamped displacement and
// Robin CSF absorption on the skull wall (tag 1), prescribed pressure and
// the matching constant traction -p_vent*n on the ventricle wall (tag 2),
// a uniform source q_injured over region 1, no body force.
ProblemData edema_boundary_data(const EdemaConfig& config);

struct TimeSeries {
  std::vector<double> times;     // minutes
  std::vector<double> max_icp;   // Pa, max of p over all DOFs
  std::vector<double> max_disp;  // mm, max of |u| over all nodes
};

// Steady state with absorption and discharge in balance (Q_s = 0).
TransientState run_normal_state(const FeSpace& u_space, const FeSpace& scalar_space,
                                const EdemaConfig& config);

struct TbiResult {
  TimeSeries series;
  TransientState final;
  double t_peak = 0.0;       // minutes to plateau (capped at t_max)
  double plateau_icp = 0.0;  // Pa
  double plateau_disp = 0.0; // mm
};

// Transient swelling run starting from the normal state, stepping until
// the max-ICP change per step drops below plateau_tol or t reaches t_max.
TbiResult run_tbi(const FeSpace& u_space, const FeSpace& scalar_space,
                  const EdemaConfig& config);

// One swelling run per absorption rate; returns (rate, plateau max ICP)
// sorted by rate. Rates must be non-negative.
std::vector<std::pair<double, double>> max_icp_vs_rate(const FeSpace& u_space,
                                                       const FeSpace& scalar_space,
                                                       const EdemaConfig& config,
                                                       std::vector<double> rates);

enum class SweepParam { YoungsModulus, PoissonRatio, Permeability };

struct SweepRow {
  double value = 0.0;       // the swept parameter value
  double mu = 0.0;          // Lame mu at that value
  double inv_lambda = 0.0;  // 1/lambda at that value
  double u_max = 0.0;       // plateau max displacement, mm
  double p_max = 0.0;       // plateau max ICP, Pa
  double t_peak = 0.0;      // minutes
};

// One swelling run per parameter value, other parameters at baseline.
std::vector<SweepRow> parameter_sweep(const FeSpace& u_space, const FeSpace& scalar_space,
                                      const EdemaConfig& config, SweepParam param,
                                      const std::vector<double>& values);

void write_time_series_csv(const TimeSeries& series, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_rate_csv(const std::vector<std::pair<double, double>>& rows, std::ostream& out);

double max_pressure(const TransientState& state);
double max_displacement_magnitude(const TransientState& state);

}  // namespace biotsim
