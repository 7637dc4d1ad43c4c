// Command-line front end: define periodic affine systems, run and compare
// integrators, emit CSV trajectories and JSON diagnostic reports.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liesplit/liesplit.hpp"

namespace {

using namespace liesplit;
using nlohmann::json;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct SystemFlags {
  bool rotor = false;
  std::string file;
  rotor::RotorParams params;  // benchmark defaults
  std::vector<double> x0;     // optional override of the initial state
};

void add_system_flags(CLI::App* cmd, SystemFlags& sf) {
  cmd->add_flag("--rotor", sf.rotor, "use the built-in unbalanced-rotor benchmark");
  cmd->add_option("--system", sf.file, "JSON system file ({omega, algebra, A, f}) or rotor parameter file");
  cmd->add_option("--m", sf.params.m, "rotor mass [kg]");
  cmd->add_option("--k", sf.params.k, "rotor bearing stiffness [N/m]");
  cmd->add_option("--omega", sf.params.omega, "rotor shaft rate [rad/s]");
  cmd->add_option("--eps", sf.params.eps, "rotor unbalance magnitude [m kg]");
  cmd->add_option("--x0", sf.x0, "initial state, comma separated")->delimiter(',');
}

struct LoadedSystem {
  LinearSystem sys;
  std::optional<rotor::RotorParams> params;  // set when the rotor model is in use
  Vec x0;
  std::string label;
};

LoadedSystem load_system(SystemFlags& sf) {
  if (!sf.rotor && sf.file.empty())
    throw invalid_input("choose a system: pass --rotor or --system <file>");
  if (sf.rotor && !sf.file.empty())
    throw invalid_input("--rotor and --system are mutually exclusive");

  if (!sf.file.empty()) {
    const json j = io::parse_json_file(sf.file);
    if (j.contains("m") && !j.contains("A")) {
      rotor::RotorParams p = io::rotor_params_from_json(j);
      if (!sf.x0.empty()) p.x0 = sf.x0;
      return {rotor::build(p), p, p.x0, "rotor:" + sf.file};
    }
    LinearSystem sys = io::system_from_json(j);
    Vec x0 = sf.x0.empty() ? Vec(sys.dim(), 0.0) : Vec(sf.x0);
    if (x0.size() != sys.dim())
      throw invalid_input("--x0 has " + std::to_string(x0.size()) + " entries, system dimension is " +
                          std::to_string(sys.dim()));
    return {std::move(sys), std::nullopt, std::move(x0), sf.file};
  }

  rotor::RotorParams p = sf.params;
  if (!sf.x0.empty()) p.x0 = sf.x0;
  return {rotor::build(p), p, p.x0, "rotor"};
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> ms;
  for (const std::string& n : names) ms.push_back(parse_method(n));
  return ms;
}

/// Envelope of component 0; when the rotor model is in use the trajectory
/// must span at least one beat period.
double component0_envelope(const LoadedSystem& ls, const Trajectory& traj) {
  const double span = ls.params ? ls.params->beat_period() : 0.0;
  return rotor::envelope_amplitude(traj, 0, span);
}

/// Worst symplectic defect of the one-step transfer matrix over a few sample
/// times spanning one coefficient period (the matrix is time-independent for
/// constant A, but sampling keeps the diagnostic honest for periodic A).
json transfer_stats(Method m, const LinearSystem& sys, double t0, double h) {
  const double period = 2.0 * std::numbers::pi / sys.omega();
  std::optional<double> worst_defect;
  double rho = 0.0;
  for (int j = 0; j < 8; ++j) {
    const StepReport rep = step_report(m, sys, t0 + j * period / 8.0, h);
    if (rep.symplectic_defect)
      worst_defect = std::max(worst_defect.value_or(0.0), *rep.symplectic_defect);
    if (j == 0) rho = rep.spectral_radius;
  }
  json out;
  out["max_symplectic_defect"] = worst_defect ? json(*worst_defect) : json(nullptr);
  out["transfer_spectral_radius"] = rho;
  return out;
}

struct GridFlags {
  double h = 0.0;
  double t0 = 0.0;
  double t_end = 0.0;
};

int run_simulate(SystemFlags& sf, const GridFlags& g, const std::string& method_name,
                 const std::string& out_path) {
  LoadedSystem ls = load_system(sf);
  const Method m = parse_method(method_name);
  Trajectory traj = integrate(m, ls.sys, ls.x0, g.t0, g.t_end, g.h);
  traj.system_label = ls.label;
  io::write_file(out_path, io::trajectory_csv(traj));
  return 0;
}

int run_compare(SystemFlags& sf, const GridFlags& g, std::vector<std::string> method_names,
                const std::string& out_path, std::string summary_path) {
  if (method_names.empty())
    method_names = {"exact", "strang", "midpoint", "heun", "sdirk2"};
  if (method_names.size() < 2)
    throw invalid_input("compare needs at least 2 methods (got " +
                        std::to_string(method_names.size()) + ")");
  if (summary_path.empty()) summary_path = out_path + ".summary.json";

  LoadedSystem ls = load_system(sf);
  const std::vector<Method> methods = parse_methods(method_names);

  // column labels; duplicated method names get a numeric suffix
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  for (const std::string& n : method_names) {
    int c = ++seen[n];
    labels.push_back(c == 1 ? n : n + "_" + std::to_string(c));
  }

  std::vector<Trajectory> trajs;
  for (Method m : methods) trajs.push_back(integrate(m, ls.sys, ls.x0, g.t0, g.t_end, g.h));

  std::optional<Vec> exact_final;
  if (ls.sys.constant_matrix())
    exact_final = exact_reference(ls.sys, ExtState{ls.x0, g.t0}, g.t_end - g.t0).x;

  const std::string q1 = io::state_column_names(ls.sys.dim()).front();
  std::string csv = "t";
  for (const std::string& lbl : labels) csv += "," + q1 + "_" + lbl;
  csv += "\n";
  for (std::size_t i = 0; i < trajs.front().size(); ++i) {
    csv += io::format_double(trajs.front().times[i]);
    for (const Trajectory& tr : trajs) csv += "," + io::format_double(tr.states[i][0]);
    csv += "\n";
  }
  io::write_file(out_path, csv);

  json methods_json;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    json entry = transfer_stats(methods[i], ls.sys, g.t0, g.h);
    entry["envelope"] = component0_envelope(ls, trajs[i]);
    entry["final_time_error"] =
        exact_final ? json(norm2(vec_sub(trajs[i].back_state(), *exact_final))) : json(nullptr);
    methods_json[labels[i]] = std::move(entry);
  }
  json summary{{"h", g.h}, {"t0", g.t0}, {"t_end", g.t_end}, {"methods", std::move(methods_json)}};
  io::write_file(summary_path, summary.dump(2) + "\n");
  return 0;
}

int run_convergence(SystemFlags& sf, double t0, double t_end, std::vector<std::string> method_names,
                    const std::vector<double>& h_list, const std::string& out_path) {
  if (method_names.empty()) method_names = {"strang", "midpoint", "heun", "sdirk2"};
  for (const std::string& n : method_names)
    if (n == "exact")
      throw invalid_input("convergence: the exact propagator has no order to measure");
  if (h_list.size() < 3) throw invalid_input("convergence: --h-list needs at least 3 step sizes");
  for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
    if (std::abs(h_list[i + 1] - 0.5 * h_list[i]) > 1e-12 * h_list[i])
      throw invalid_input("convergence: step sizes must halve (" + fmt_g(h_list[i + 1]) +
                          " does not follow " + fmt_g(h_list[i]) + ")");

  LoadedSystem ls = load_system(sf);
  const std::vector<Method> methods = parse_methods(method_names);

  json report;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const ConvergenceResult res =
        convergence_order(methods[i], ls.sys, ls.x0, t0, t_end, h_list);
    json entry;
    for (auto [h, e] : res.errors) entry[fmt_g(h)] = e;
    entry["slope"] = res.slope;
    report[method_names[i]] = std::move(entry);
  }
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    io::write_file(out_path, text);
  return 0;
}

int run_algebra_check(SystemFlags& sf, std::uint64_t seed, const std::string& out_path) {
  LoadedSystem ls = load_system(sf);
  const LinearSystem& sys = ls.sys;
  const std::size_t n = sys.dim();

  AlgebraSpec spec;
  spec.algebra = sys.algebra;
  spec.n = n;
  spec.omega = sys.omega();
  spec.vec_order = sys.f.trimmed_order();
  spec.mat_order = sys.A.trimmed_order();

  json report;
  report["algebra"] = std::string(algebra_name(spec.algebra));
  report["n"] = n;
  report["omega"] = spec.omega;
  report["seed"] = seed;
  const auto dim = dimension(spec);
  report["dimension"] = dim ? json(*dim) : json(nullptr);

  // Hamiltonian defect of A at 16 sample times over one period
  const bool sp = spec.algebra == MatrixAlgebra::symplectic && n % 2 == 0;
  report["hamiltonian_check_skipped"] = !sp;
  if (sp) {
    const SymplecticForm J(n);
    const double period = 2.0 * std::numbers::pi / spec.omega;
    double worst = 0.0;
    for (int j = 0; j < 16; ++j)
      worst = std::max(worst, hamiltonian_defect(sys.A.eval(j * period / 16.0), J));
    report["hamiltonian_defect"] = worst;
  } else {
    report["hamiltonian_defect"] = nullptr;
  }

  Rng rng(seed);
  const LieElement own = sys.field();

  // closure of brackets against the declared sub-algebra
  json closure;
  bool pass = true;
  double max_defect = 0.0, max_alpha = 0.0;
  int max_mat_order = 0, max_vec_order = 0;
  const int pairs = 20;
  for (int i = 0; i < pairs; ++i) {
    const LieElement X = (i == 0) ? own : random_element(rng, spec);
    const LieElement Y = (i <= 1) ? own : random_element(rng, spec);
    const ClosureReport rep = closure_check(X, Y, spec);
    pass = pass && rep.pass();
    max_defect = std::max(max_defect, rep.matrix_algebra_defect);
    max_alpha = std::max(max_alpha, std::abs(rep.alpha_value));
    max_mat_order = std::max(max_mat_order, rep.matrix_order);
    max_vec_order = std::max(max_vec_order, rep.vector_order);
  }
  closure["pass"] = pass;
  closure["pairs"] = pairs;
  closure["max_matrix_defect"] = max_defect;
  closure["max_matrix_order"] = max_mat_order;
  closure["max_vector_order"] = max_vec_order;
  closure["max_abs_alpha"] = max_alpha;
  report["closure"] = std::move(closure);

  double jac = 0.0;
  for (int i = 0; i < 20; ++i)
    jac = std::max(jac, jacobi_defect(random_element(rng, spec), random_element(rng, spec),
                                      random_element(rng, spec)));
  report["jacobi_max"] = jac;

  // modified-field series of the standard splitting of this system
  const LieElement Y(sys.A, VecTrigPoly::zero(sys.omega(), sys.f.constant_coeff()), 0.0);
  const LieElement Z(MatTrigPoly(sys.omega(), Matrix(n, n)), sys.f, 1.0);
  const std::vector<BchTerm> terms = bch_modified_element(Y, Z);
  report["bch_order2"] = json{{"c1", bch_c1},
                              {"c2", bch_c2},
                              {"order2_element_norm", element_norm(terms[1].element)}};

  const std::string text = report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    io::write_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric integration of periodic affine systems xdot = A(t) x + f(t)"};
  app.require_subcommand(1);
  // --h is a step-size option here, so help loses its short name
  app.set_help_flag("--help", "print help and exit");

  SystemFlags sf_sim, sf_cmp, sf_conv, sf_alg;
  GridFlags g_sim, g_cmp;
  double conv_t0 = 0.0, conv_t_end = 10.0;
  std::string sim_method, sim_out, cmp_out, cmp_summary, conv_out, alg_out;
  std::vector<std::string> cmp_methods, conv_methods;
  std::vector<double> h_list;
  std::uint64_t seed = 0;

  CLI::App* sim = app.add_subcommand("simulate", "integrate one method and write a trajectory CSV");
  sim->set_help_flag("--help", "print help and exit");
  add_system_flags(sim, sf_sim);
  sim->add_option("--method", sim_method, "one of: exact strang midpoint heun sdirk2")->required();
  sim->add_option("--h", g_sim.h, "step size [s]")->required();
  sim->add_option("--t0", g_sim.t0, "start time [s]");
  sim->add_option("--t-end", g_sim.t_end, "end time [s]")->required();
  sim->add_option("--out", sim_out, "output CSV path")->required();

  CLI::App* cmp = app.add_subcommand(
      "compare", "run several methods on one grid; wide CSV of q1 plus a summary JSON");
  cmp->set_help_flag("--help", "print help and exit");
  add_system_flags(cmp, sf_cmp);
  cmp->add_option("--method", cmp_methods, "methods to compare (default: all five)")->delimiter(',');
  cmp->add_option("--h", g_cmp.h, "step size [s]")->required();
  cmp->add_option("--t0", g_cmp.t0, "start time [s]");
  cmp->add_option("--t-end", g_cmp.t_end, "end time [s]")->required();
  cmp->add_option("--out", cmp_out, "output CSV path")->required();
  cmp->add_option("--summary", cmp_summary, "summary JSON path (default: <out>.summary.json)");

  CLI::App* conv = app.add_subcommand("convergence", "measure observed orders over halving steps");
  conv->set_help_flag("--help", "print help and exit");
  add_system_flags(conv, sf_conv);
  conv->add_option("--method", conv_methods, "methods to measure (default: the four steppers)")
      ->delimiter(',');
  conv->add_option("--h-list", h_list, "comma-separated halving step sizes (at least 3)")
      ->delimiter(',')
      ->required();
  conv->add_option("--t0", conv_t0, "start time [s]");
  conv->add_option("--t-end", conv_t_end, "end time [s]");
  conv->add_option("--out", conv_out, "output JSON path (default: stdout)");

  CLI::App* alg = app.add_subcommand(
      "algebra-check", "structural report: Hamiltonian defect, closure, dimension, Jacobi, BCH");
  alg->set_help_flag("--help", "print help and exit");
  add_system_flags(alg, sf_alg);
  alg->add_option("--seed", seed, "seed for the random structural probes");
  alg->add_option("--out", alg_out, "output JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(sf_sim, g_sim, sim_method, sim_out);
    if (cmp->parsed()) return run_compare(sf_cmp, g_cmp, cmp_methods, cmp_out, cmp_summary);
    if (conv->parsed())
      return run_convergence(sf_conv, conv_t0, conv_t_end, conv_methods, h_list, conv_out);
    if (alg->parsed()) return run_algebra_check(sf_alg, seed, alg_out);
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
