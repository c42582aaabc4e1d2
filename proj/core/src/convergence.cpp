#include "biotsim/convergence.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "biotsim/error_norms.hpp"

namespace biotsim {

double compute_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw std::domain_error("compute_order: errors must be positive");
  return std::log2(e_coarse / e_fine);
}

ConvergenceTable convergence_study(const StudyOptions& options) {
  if (options.levels < 2)
    throw std::invalid_argument("convergence_study: need at least 2 levels");

  const ManufacturedCase mc = ManufacturedCase::make(options.nu, options.K);
  const ProblemData data = mc.data();

  auto exact_u = [&mc](double x, double y, double t) { return mc.exact_u(x, y, t); };
  auto exact_grad_u = [&mc](double x, double y, double t) { return mc.exact_grad_u(x, y, t); };
  auto exact_p = [&mc](double x, double y, double t) { return mc.exact_p(x, y, t); };
  auto exact_grad_p = [&mc](double x, double y, double t) { return mc.exact_grad_p(x, y, t); };
  auto exact_xi = [&mc](double x, double y, double t) { return mc.exact_xi(x, y, t); };
  auto exact_grad_xi = [&mc](double x, double y, double t) { return mc.exact_grad_xi(x, y, t); };

  InitialCondition initial =
      options.initial == InitialKind::ZeroDisplacement
          ? InitialCondition::zero_displacement(exact_p)
          : InitialCondition::interpolate_exact(exact_u, exact_p);

  TransientOptions topt;
  topt.algorithm = options.algorithm;
  topt.dt = options.dt;
  topt.t_end = mc.final_time;
  topt.load_level = options.load_level;

  ConvergenceTable table;
  Mesh mesh = unit_square_mesh(options.base_n);
  for (int level = 0; level < options.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    const FeSpace u_space(mesh, Family::P2Vector2);
    const FeSpace scalar_space(mesh, Family::P1Scalar);

    const Trajectory traj =
        run_transient(u_space, scalar_space, mc.material, data, topt, initial);
    const double T = traj.final.t;

    const ErrorNorms eu = error_norms(traj.final.u, exact_u, exact_grad_u, T);
    const ErrorNorms exi = error_norms(traj.final.xi, exact_xi, exact_grad_xi, T);
    const ErrorNorms ep = error_norms(traj.final.p, exact_p, exact_grad_p, T);

    ConvergenceRow row;
    row.elements = mesh.n_triangles();
    row.h1_u = eu.h1;
    row.l2_xi = exi.l2;
    row.h1_xi = exi.h1;
    row.l2_p = ep.l2;
    row.h1_p = ep.h1;
    row.h1semi_u = eu.h1_semi;
    row.h1semi_xi = exi.h1_semi;
    row.h1semi_p = ep.h1_semi;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (table.rows.empty()) {
      row.ord_h1_u = row.ord_l2_xi = row.ord_h1_xi = row.ord_l2_p = row.ord_h1_p = nan;
    } else {
      const ConvergenceRow& prev = table.rows.back();
      row.ord_h1_u = compute_order(prev.h1_u, row.h1_u);
      row.ord_l2_xi = compute_order(prev.l2_xi, row.l2_xi);
      row.ord_h1_xi = compute_order(prev.h1_xi, row.h1_xi);
      row.ord_l2_p = compute_order(prev.l2_p, row.l2_p);
      row.ord_h1_p = compute_order(prev.h1_p, row.h1_p);
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

void append_real(std::string& line, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, ptr);
}

void append_order(std::string& line, double v) {
  line.push_back(',');
  if (!std::isnan(v)) append_real(line, v);
}

}  // namespace

void write_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "elements,h1_u,ord_h1_u,l2_xi,ord_l2_xi,h1_xi,ord_h1_xi,l2_p,ord_l2_p,h1_p,ord_h1_p\n";
  for (const auto& r : table.rows) {
    std::string line = std::to_string(r.elements);
    line.push_back(',');
    append_real(line, r.h1_u);
    append_order(line, r.ord_h1_u);
    line.push_back(',');
    append_real(line, r.l2_xi);
    append_order(line, r.ord_l2_xi);
    line.push_back(',');
    append_real(line, r.h1_xi);
    append_order(line, r.ord_h1_xi);
    line.push_back(',');
    append_real(line, r.l2_p);
    append_order(line, r.ord_l2_p);
    line.push_back(',');
    append_real(line, r.h1_p);
    append_order(line, r.ord_h1_p);
    out << line << "\n";
  }
}

void write_seminorm_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "elements,h1semi_u,h1semi_xi,h1semi_p\n";
  for (const auto& r : table.rows) {
    std::string line = std::to_string(r.elements);
    line.push_back(',');
    append_real(line, r.h1semi_u);
    line.push_back(',');
    append_real(line, r.h1semi_xi);
    line.push_back(',');
    append_real(line, r.h1semi_p);
    out << line << "\n";
  }
}

}  // namespace biotsim
