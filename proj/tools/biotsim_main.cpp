// Command-line driver: `verify` reproduces the manufactured-solution
// convergence tables, `edema` runs the brain-swelling scenarios.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "biotsim/convergence.hpp"
#include "biotsim/edema.hpp"
#include "biotsim/mesh_io.hpp"
#include "biotsim/run_config.hpp"
#include "biotsim/synthetic_brain.hpp"
#include "biotsim/vtk_writer.hpp"

namespace {

using namespace biotsim;

struct VerifyArgs {
  std::string algorithm = "coupled";
  double nu = 0.3;
  double K = 1.0;
  double dt = 1e-5;
  int levels = 4;
  int base_n = 17;
  std::string load_level = "next";
  std::string initial = "exact";
  std::string out;
};

struct EdemaArgs {
  std::string mode;
  std::string mesh = "synthetic";
  std::string config;
  std::string out = ".";
  bool dump_dofs = false;
};

Algorithm parse_algorithm(const std::string& name) {
  if (name == "coupled") return Algorithm::Coupled;
  if (name == "decoupled") return Algorithm::Decoupled;
  throw std::invalid_argument("unknown algorithm '" + name + "' (coupled | decoupled)");
}

int run_verify(const VerifyArgs& args) {
  StudyOptions opts;
  opts.algorithm = parse_algorithm(args.algorithm);
  opts.nu = args.nu;
  opts.K = args.K;
  opts.dt = args.dt;
  opts.levels = args.levels;
  opts.base_n = args.base_n;
  opts.load_level = args.load_level == "current" ? LoadTimeLevel::Current : LoadTimeLevel::Next;
  opts.initial =
      args.initial == "zero-u" ? InitialKind::ZeroDisplacement : InitialKind::InterpolateExact;

  const ConvergenceTable table = convergence_study(opts);
  if (args.out.empty()) {
    write_csv(table, std::cout);
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot open '" + args.out + "' for writing");
    write_csv(table, out);

    std::filesystem::path semi(args.out);
    semi.replace_filename(semi.stem().string() + "_seminorm" + semi.extension().string());
    std::ofstream semi_out(semi);
    write_seminorm_csv(table, semi_out);
    std::cout << "wrote " << args.out << " and " << semi.string() << "\n";
  }
  return 0;
}

EdemaConfig config_from(const RunConfig& rc) {
  EdemaConfig cfg;
  cfg.material = BiotMaterial::make(rc.get_real("E"), rc.get_real("nu"), rc.get_real("alpha"),
                                    rc.get_real("c0"), rc.get_real("kappa"), rc.get_real("mu_f"));
  cfg.c_b = rc.get_real("c_b");
  cfg.p_sas = rc.get_real("p_sas");
  cfg.p_vent = rc.get_real("p_vent");
  cfg.q_injured = rc.get_real("q_injured");
  cfg.dt = rc.get_real("dt");
  cfg.t_max = rc.get_real("t_max");
  cfg.plateau_tol = rc.get_real("plateau_tol");
  cfg.algorithm = parse_algorithm(rc.get("algorithm"));
  return cfg;
}

void write_fields_vtk(const std::filesystem::path& path, const Mesh& mesh,
                      const TransientState& state) {
  write_vtk(path.string(), mesh,
            {{"pressure", &state.p}, {"total_pressure", &state.xi}},
            {{"displacement", &state.u}});
}

void dump_dof_files(const std::filesystem::path& dir, const std::string& prefix,
                    const TransientState& state) {
  for (const auto& [name, field] :
       std::initializer_list<std::pair<std::string, const CoefficientVector*>>{
           {"pressure", &state.p}, {"total_pressure", &state.xi}, {"displacement", &state.u}}) {
    std::ofstream out(dir / (prefix + "_" + name + "_dofs.csv"));
    write_dof_csv(out, *field);
  }
}

int run_edema(const EdemaArgs& args) {
  const RunConfig rc =
      args.config.empty() ? RunConfig::defaults() : RunConfig::from_file(args.config);
  const EdemaConfig cfg = config_from(rc);

  Mesh mesh;
  if (args.mesh == "synthetic") {
    mesh = synthetic_brain_mesh(rc.get_real("outer_width"), rc.get_real("outer_height"),
                                rc.get_real("ventricle_scale"), rc.get_real("injured_fraction"),
                                rc.get_int("target_elements"));
  } else {
    mesh = load_mesh(args.mesh);
  }

  const std::filesystem::path out_dir(args.out);
  std::filesystem::create_directories(out_dir);
  write_mesh(mesh, (out_dir / "mesh.txt").string());

  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);

  if (args.mode == "normal") {
    const TransientState state = run_normal_state(u_space, scalar_space, cfg);
    write_fields_vtk(out_dir / "normal_state.vtk", mesh, state);
    if (args.dump_dofs) dump_dof_files(out_dir, "normal", state);
    double lo = state.p.values[0], hi = state.p.values[0];
    for (double v : state.p.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::cout << "normal-state pressure range: [" << lo << ", " << hi << "] Pa\n";
  } else if (args.mode == "tbi") {
    const TbiResult result = run_tbi(u_space, scalar_space, cfg);
    std::ofstream series(out_dir / "tbi_series.csv");
    write_time_series_csv(result.series, series);
    write_fields_vtk(out_dir / "tbi_final.vtk", mesh, result.final);
    if (args.dump_dofs) dump_dof_files(out_dir, "tbi", result.final);
    std::cout << "plateau max ICP " << result.plateau_icp << " Pa, max displacement "
              << result.plateau_disp << " mm, t_peak " << result.t_peak << " min\n";
  } else if (args.mode == "rate-sweep") {
    const auto table = max_icp_vs_rate(u_space, scalar_space, cfg, rc.get_list("rates"));
    std::ofstream out(out_dir / "rate_sweep.csv");
    write_rate_csv(table, out);
    std::cout << "wrote " << (out_dir / "rate_sweep.csv").string() << "\n";
  } else if (args.mode == "param-sweep") {
    const std::string param = rc.get("sweep_param");
    SweepParam sweep;
    std::vector<double> values;
    if (param == "nu") {
      sweep = SweepParam::PoissonRatio;
      values = rc.get_list("sweep_values");
    } else if (param == "E" || param == "kappa") {
      sweep = param == "E" ? SweepParam::YoungsModulus : SweepParam::Permeability;
      const double base = param == "E" ? cfg.material.E : cfg.material.kappa;
      for (double f : rc.get_list("sweep_factors")) values.push_back(f * base);
    } else {
      throw std::invalid_argument("sweep_param must be E, nu, or kappa (got '" + param + "')");
    }
    const auto rows = parameter_sweep(u_space, scalar_space, cfg, sweep, values);
    std::ofstream out(out_dir / "param_sweep.csv");
    write_sweep_csv(rows, out);
    std::cout << "wrote " << (out_dir / "param_sweep.csv").string() << "\n";
  } else {
    throw std::invalid_argument("unknown mode '" + args.mode +
                                "' (normal | tbi | rate-sweep | param-sweep)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element solver for Biot poroelasticity with a total-pressure "
               "three-field formulation"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Manufactured-solution convergence study on the unit square");
  verify->add_option("--algorithm", verify_args.algorithm, "coupled | decoupled")
      ->check(CLI::IsMember({"coupled", "decoupled"}));
  verify->add_option("--nu", verify_args.nu, "Poisson ratio");
  verify->add_option("--K", verify_args.K, "hydraulic conductivity");
  verify->add_option("--dt", verify_args.dt, "time step");
  verify->add_option("--levels", verify_args.levels, "refinement levels (>= 2)");
  verify->add_option("--base-n", verify_args.base_n, "coarsest mesh subdivision (2n^2 elements)");
  verify->add_option("--load-level", verify_args.load_level, "evaluate loads at: next | current")
      ->check(CLI::IsMember({"next", "current"}));
  verify->add_option("--initial", verify_args.initial, "initial data: exact | zero-u")
      ->check(CLI::IsMember({"exact", "zero-u"}));
  verify->add_option("--out", verify_args.out, "CSV output path (stdout when omitted)");

  EdemaArgs edema_args;
  CLI::App* edema = app.add_subcommand("edema", "Brain-edema application runs");
  edema->add_option("--mode", edema_args.mode, "normal | tbi | rate-sweep | param-sweep")
      ->required();
  edema->add_option("--mesh", edema_args.mesh, "mesh file path or 'synthetic'");
  edema->add_option("--config", edema_args.config, "key=value configuration file");
  edema->add_option("--out", edema_args.out, "output directory");
  edema->add_flag("--dump-dofs", edema_args.dump_dofs, "also write full-precision DOF CSVs");
  edema->footer(biotsim::config_help_text());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_verify(verify_args);
    if (edema->parsed()) return run_edema(edema_args);
  } catch (const biotsim::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
