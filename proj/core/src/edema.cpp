#include "biotsim/edema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace biotsim {

EdemaConfig EdemaConfig::baseline() {
  EdemaConfig cfg;
  cfg.material = BiotMaterial::make(9010.0, 0.35, 1.0, 4.5e-7, 1.4e-9, 1.48e-5);
  return cfg;
}

double conductance(double Q0, double p_d, double A_sas) {
  if (!(Q0 > 0.0 && p_d > 0.0 && A_sas > 0.0))
    throw std::domain_error("conductance: all inputs must be positive");
  return Q0 / (p_d * A_sas);
}

ProblemData edema_boundary_data(const EdemaConfig& config) {
  ProblemData d;
  d.dirichlet_u_tags = {1};  // clamped at the skull
  d.dirichlet_p_tags = {2};
  const double p_vent = config.p_vent;
  d.dirichlet_p = [p_vent](double, double, double) { return p_vent; };
  d.robin = RobinData{1, config.c_b, config.p_sas};
  d.traction_tags = {2};
  d.traction = [p_vent](double, double, double, const Vec2& n) -> Vec2 {
    return {-p_vent * n[0], -p_vent * n[1]};
  };
  const double q = config.q_injured;
  if (q != 0.0) {
    d.source = [q](double, double, double) { return q; };
    d.source_region = 1;
  }
  return d;
}

double max_pressure(const TransientState& state) {
  double m = state.p.values.empty() ? 0.0 : state.p.values[0];
  for (double v : state.p.values) m = std::max(m, v);
  return m;
}

double max_displacement_magnitude(const TransientState& state) {
  double m = 0.0;
  for (size_t n = 0; n + 1 < state.u.values.size(); n += 2)
    m = std::max(m, std::hypot(state.u.values[n], state.u.values[n + 1]));
  return m;
}

TransientState run_normal_state(const FeSpace& u_space, const FeSpace& scalar_space,
                                const EdemaConfig& config) {
  EdemaConfig balanced = config;
  balanced.q_injured = 0.0;  // absorption and discharge in balance
  const ProblemData data = edema_boundary_data(balanced);
  return solve_steady(u_space, scalar_space, config.material, data);
}

TbiResult run_tbi(const FeSpace& u_space, const FeSpace& scalar_space,
                  const EdemaConfig& config) {
  const Mesh& mesh = u_space.mesh();
  bool has_injury = false;
  for (int r : mesh.triangle_region)
    if (r == 1) has_injury = true;
  if (!has_injury) throw std::invalid_argument("run_tbi: mesh has no injured region (region 1)");

  const ProblemData data = edema_boundary_data(config);

  TransientState state = run_normal_state(u_space, scalar_space, config);
  state.xi = total_pressure_init(state.u, state.p, config.material);
  state.t = 0.0;

  TbiResult result;
  result.series.times.push_back(0.0);
  result.series.max_icp.push_back(max_pressure(state));
  result.series.max_disp.push_back(max_displacement_magnitude(state));

  const long max_steps = std::lround(config.t_max / config.dt);

  auto record = [&](const TransientState& s) {
    result.series.times.push_back(s.t);
    result.series.max_icp.push_back(max_pressure(s));
    result.series.max_disp.push_back(max_displacement_magnitude(s));
  };
  auto plateaued = [&]() {
    const auto& icp = result.series.max_icp;
    const double prev = icp[icp.size() - 2];
    const double curr = icp.back();
    return std::abs(curr - prev) <= config.plateau_tol * std::max(std::abs(curr), 1e-300);
  };

  if (config.algorithm == Algorithm::Coupled) {
    const CoupledSystem sys =
        assemble_coupled_system(u_space, scalar_space, config.material, config.dt, data);
    const Factorization fact(sys.matrix);
    for (long n = 0; n < max_steps; ++n) {
      state = coupled_step(state, fact, sys, data, config.dt);
      record(state);
      if (plateaued()) break;
    }
  } else {
    const DecoupledSystem sys =
        assemble_decoupled_system(u_space, scalar_space, config.material, config.dt, data);
    const Factorization stokes_fact(sys.stokes_matrix);
    const Factorization diffusion_fact(sys.diffusion_matrix);
    for (long n = 0; n < max_steps; ++n) {
      state = decoupled_step(state, stokes_fact, diffusion_fact, sys, data, config.dt);
      record(state);
      if (plateaued()) break;
    }
  }

  result.final = std::move(state);
  result.t_peak = result.series.times.back();
  result.plateau_icp = result.series.max_icp.back();
  result.plateau_disp = result.series.max_disp.back();
  return result;
}

std::vector<std::pair<double, double>> max_icp_vs_rate(const FeSpace& u_space,
                                                       const FeSpace& scalar_space,
                                                       const EdemaConfig& config,
                                                       std::vector<double> rates) {
  for (double r : rates)
    if (r < 0.0) throw std::invalid_argument("max_icp_vs_rate: rates must be non-negative");
  std::sort(rates.begin(), rates.end());

  std::vector<std::pair<double, double>> table;
  table.reserve(rates.size());
  for (double rate : rates) {
    EdemaConfig cfg = config;
    cfg.q_injured = rate;
    if (rate == 0.0) {
      const TransientState steady = run_normal_state(u_space, scalar_space, cfg);
      table.emplace_back(rate, max_pressure(steady));
    } else {
      table.emplace_back(rate, run_tbi(u_space, scalar_space, cfg).plateau_icp);
    }
  }
  return table;
}

std::vector<SweepRow> parameter_sweep(const FeSpace& u_space, const FeSpace& scalar_space,
                                      const EdemaConfig& config, SweepParam param,
                                      const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    EdemaConfig cfg = config;
    const BiotMaterial& b = config.material;
    switch (param) {
      case SweepParam::YoungsModulus:
        cfg.material = BiotMaterial::make(value, b.nu, b.alpha, b.c0, b.kappa, b.mu_f);
        break;
      case SweepParam::PoissonRatio:
        cfg.material = BiotMaterial::make(b.E, value, b.alpha, b.c0, b.kappa, b.mu_f);
        break;
      case SweepParam::Permeability:
        cfg.material = BiotMaterial::make(b.E, b.nu, b.alpha, b.c0, value, b.mu_f);
        break;
    }
    const TbiResult r = run_tbi(u_space, scalar_space, cfg);
    rows.push_back({value, cfg.material.mu, 1.0 / cfg.material.lambda, r.plateau_disp,
                    r.plateau_icp, r.t_peak});
  }
  return rows;
}

namespace {

void append_real(std::string& line, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, ptr);
}

}  // namespace

void write_time_series_csv(const TimeSeries& series, std::ostream& out) {
  out << "t_min,max_icp_pa,max_disp_mm\n";
  for (size_t i = 0; i < series.times.size(); ++i) {
    std::string line;
    append_real(line, series.times[i]);
    line.push_back(',');
    append_real(line, series.max_icp[i]);
    line.push_back(',');
    append_real(line, series.max_disp[i]);
    out << line << "\n";
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "value,mu,inv_lambda,u_max_mm,p_max_pa,t_peak_min\n";
  for (const auto& r : rows) {
    std::string line;
    append_real(line, r.value);
    line.push_back(',');
    append_real(line, r.mu);
    line.push_back(',');
    append_real(line, r.inv_lambda);
    line.push_back(',');
    append_real(line, r.u_max);
    line.push_back(',');
    append_real(line, r.p_max);
    line.push_back(',');
    append_real(line, r.t_peak);
    out << line << "\n";
  }
}

void write_rate_csv(const std::vector<std::pair<double, double>>& rows, std::ostream& out) {
  out << "rate,plateau_max_icp_pa\n";
  for (const auto& [rate, icp] : rows) {
    std::string line;
    append_real(line, rate);
    line.push_back(',');
    append_real(line, icp);
    out << line << "\n";
  }
}

}  // namespace biotsim
