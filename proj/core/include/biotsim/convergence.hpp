#pragma once

#include <iosfwd>
#include <vector>

#include "biotsim/manufactured.hpp"
#include "biotsim/stepping.hpp"

namespace biotsim {

// Observed order between two refinement levels, log2(e_coarse / e_fine).
// Throws std::domain_error when either error is not positive.
double compute_order(double e_coarse, double e_fine);

struct ConvergenceRow {
  int elements = 0;
  double h1_u = 0.0, l2_xi = 0.0, h1_xi = 0.0, l2_p = 0.0, h1_p = 0.0;
  double h1semi_u = 0.0, h1semi_xi = 0.0, h1semi_p = 0.0;
  // orders against the previous level; NaN on the first row
  double ord_h1_u = 0.0, ord_l2_xi = 0.0, ord_h1_xi = 0.0, ord_l2_p = 0.0, ord_h1_p = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

struct StudyOptions {
  Algorithm algorithm = Algorithm::Coupled;
  double nu = 0.3;
  double K = 1.0;
  double dt = 1e-5;
  int levels = 4;
  int base_n = 17;  // 2*17^2 = 578 elements on the coarsest level
  LoadTimeLevel load_level = LoadTimeLevel::Next;
  InitialKind initial = InitialKind::InterpolateExact;
};

// Runs the benchmark to T = 1e-3 on a sequence of uniformly refined
// meshes and reports errors at the final time with observed orders.
ConvergenceTable convergence_study(const StudyOptions& options);

// CSV with header elements,h1_u,ord_h1_u,l2_xi,ord_l2_xi,h1_xi,ord_h1_xi,
// l2_p,ord_l2_p,h1_p,ord_h1_p; order cells are empty on the first row.
void write_csv(const ConvergenceTable& table, std::ostream& out);
// Companion CSV with the H1 seminorms per level.
void write_seminorm_csv(const ConvergenceTable& table, std::ostream& out);

}  // namespace biotsim
