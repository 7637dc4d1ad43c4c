// Acceptance suite: end-to-end checks of the library and CLI on the rotor
// benchmark. Each criterion prints one PASS/FAIL line (with its runtime) and
// the process exits with the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "liesplit/liesplit.hpp"

using namespace liesplit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path = LIESPLIT_CLI_PATH;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = "'" + g_cli_path + "' " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string out;
  char buf[4096];
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const rotor::RotorParams& bench_params() {
  static const rotor::RotorParams p{};
  return p;
}

const LinearSystem& rotor_sys() {
  static const LinearSystem sys = rotor::build(bench_params());
  return sys;
}

// ---- criterion 1: resonant beat envelope from the two exact oracles -------

void criterion_envelope(Outcome& out) {
  const rotor::RotorParams& p = bench_params();
  const double peak = rotor::exact_envelope(p);
  out.expect(std::abs(peak - 5.1505) <= 5e-4,
             "formula envelope " + fmt(peak) + " != 5.1505");

  const Trajectory ref = integrate(Method::exact, rotor_sys(), p.x0, 0.0, 1000.0, 0.05);
  Trajectory cf;
  cf.method = "closed-form";
  cf.step_size = 0.05;
  cf.times = ref.times;
  for (double t : ref.times) cf.states.push_back(rotor::closed_form_solution(p, t));

  const double env_ref = rotor::envelope_amplitude(ref, 0, p.beat_period());
  const double env_cf = rotor::envelope_amplitude(cf, 0, p.beat_period());
  out.expect(std::abs(env_ref - env_cf) <= 1e-8,
             "oracle envelopes differ by " + fmt(std::abs(env_ref - env_cf)));
  out.expect(env_ref >= 0.995 * peak && env_ref <= peak * (1.0 + 1e-9),
             "sampled envelope " + fmt(env_ref) + " is not at the beat peak " + fmt(peak));
  out.note("peak " + fmt(peak) + ", sampled " + fmt(env_ref) + ", oracle gap " +
           fmt(std::abs(env_ref - env_cf)));
}

// ---- criterion 2: global order two for all four steppers ------------------

void criterion_orders(Outcome& out) {
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  std::string seen;
  for (Method m : {Method::strang, Method::midpoint, Method::heun, Method::sdirk2}) {
    const ConvergenceResult res =
        convergence_order(m, rotor_sys(), bench_params().x0, 0.0, 10.0, hs);
    out.expect(res.slope >= 1.9 && res.slope <= 2.1,
               std::string(method_name(m)) + " slope " + fmt(res.slope) + " outside [1.9, 2.1]");
    seen += std::string(method_name(m)) + " " + fmt(res.slope) + "  ";
  }
  out.note("slopes: " + seen);
}

// ---- criterion 3: structure preservation of the transfer matrices ---------

void criterion_structure(Outcome& out) {
  for (double h : {0.01, 0.1, 0.5}) {
    for (Method m : {Method::strang, Method::midpoint}) {
      const StepReport rep = step_report(m, rotor_sys(), 0.0, h);
      out.expect(rep.symplectic_defect.value() <= 1e-11,
                 std::string(method_name(m)) + " defect " + fmt(*rep.symplectic_defect) +
                     " at h=" + fmt(h));
      out.expect(std::abs(rep.spectral_radius - 1.0) <= 1e-10,
                 std::string(method_name(m)) + " radius " + fmt(rep.spectral_radius) +
                     " at h=" + fmt(h));
    }
    const StepReport heun = step_report(Method::heun, rotor_sys(), 0.0, h);
    const double heun_expect = std::sqrt(1.0 + h * h * h * h / 4.0);
    out.expect(std::abs(heun.spectral_radius - heun_expect) <= 1e-12,
               "heun radius " + fmt(heun.spectral_radius) + " != " + fmt(heun_expect) +
                   " at h=" + fmt(h));
    out.expect(heun.spectral_radius > 1.0, "heun radius not expanding at h=" + fmt(h));
    const StepReport sdirk = step_report(Method::sdirk2, rotor_sys(), 0.0, h);
    out.expect(sdirk.spectral_radius < 1.0,
               "sdirk2 radius " + fmt(sdirk.spectral_radius) + " not contracting at h=" + fmt(h));
  }
}

// ---- criterion 4: long coarse-step run separates the method classes -------

void criterion_longrun(Outcome& out) {
  const rotor::RotorParams& p = bench_params();
  const double env = rotor::exact_envelope(p);

  auto peak_of = [&](Method m, double from) {
    const Trajectory tr = integrate(m, rotor_sys(), p.x0, 0.0, 1000.0, 0.5);
    double peak = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
      if (tr.times[i] >= from) peak = std::max(peak, std::abs(tr.states[i][0]));
    return peak;
  };

  for (Method m : {Method::strang, Method::midpoint}) {
    const double peak = peak_of(m, 0.0);
    out.expect(peak >= env / 2.0 && peak <= env * 2.0,
               std::string(method_name(m)) + " max|q1| " + fmt(peak) + " not within a factor 2 of " +
                   fmt(env) + " (ratio " + fmt(env / peak) + ")");
    out.note(std::string(method_name(m)) + " peak " + fmt(peak));
  }
  const double heun_peak = peak_of(Method::heun, 0.0);
  out.expect(heun_peak > 10.0 * env,
             "heun max|q1| " + fmt(heun_peak) + " did not exceed 10x the envelope");
  out.note("heun peak " + fmt(heun_peak));
  const double sdirk_tail = peak_of(Method::sdirk2, 750.0);
  out.expect(sdirk_tail < 0.25 * env,
             "sdirk2 trailing-quarter envelope " + fmt(sdirk_tail) + " not below 25% of " + fmt(env));
  out.note("sdirk2 trailing " + fmt(sdirk_tail));
}

// ---- criterion 5: Lie-algebra suite ---------------------------------------

void criterion_lie(Outcome& out) {
  Rng rng(1);
  const double w = 1.02;
  auto rand_el = [&](int k, int l) {
    return LieElement(random_mat_poly(rng, w, 4, l), random_vec_poly(rng, w, 4, k),
                      rng.symmetric());
  };

  double anti = 0.0, jac = 0.0, bil = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LieElement X = rand_el(2, 2), Y = rand_el(2, 2), Z = rand_el(2, 2);
    anti = std::max(anti, element_norm(element_combo(1.0, bracket(X, Y), 1.0, bracket(Y, X))));
    jac = std::max(jac, jacobi_defect(X, Y, Z));
    const double a = rng.symmetric(), b = rng.symmetric();
    const LieElement lhs = bracket(element_combo(a, X, b, Y), Z);
    const LieElement rhs = element_combo(a, bracket(X, Z), b, bracket(Y, Z));
    bil = std::max(bil, element_norm(element_combo(1.0, lhs, -1.0, rhs)));
  }
  out.expect(anti == 0.0, "bracket antisymmetry defect " + fmt(anti) + " nonzero");
  out.expect(jac <= 1e-11, "jacobi defect " + fmt(jac) + " above 1e-11");
  out.expect(bil <= 1e-11, "bilinearity defect " + fmt(bil) + " above 1e-11");

  const AlgebraSpec spec{MatrixAlgebra::symplectic, 4, w, 1, 0};
  bool closure_ok = true;
  for (int i = 0; i < 100; ++i)
    closure_ok = closure_ok &&
                 closure_check(random_element(rng, spec), random_element(rng, spec), spec).pass();
  out.expect(closure_ok, "a random pair in the rotor sub-algebra failed closure");

  out.expect(dimension(rotor::algebra_spec(bench_params())).value() == 23, "rotor dimension != 23");

  // order-1 matrix parts with non-commuting coefficients escape l = 1
  const Matrix C1{{0.0, 1.0}, {0.0, 0.0}}, C2{{0.0, 0.0}, {1.0, 0.0}};
  const VecTrigPoly zf = VecTrigPoly::zero(w, Vec(2, 0.0));
  const LieElement X(MatTrigPoly(w, Matrix(2, 2), {C1}, {Matrix(2, 2)}), zf, 0.0);
  const LieElement Y(MatTrigPoly(w, Matrix(2, 2), {C2}, {Matrix(2, 2)}), zf, 0.0);
  const AlgebraSpec order1{MatrixAlgebra::general_linear, 2, w, 0, 1};
  const ClosureReport rep = closure_check(X, Y, order1);
  out.expect(!rep.pass() && rep.matrix_order == 2,
             "order-1 counterexample did not escape (order " + std::to_string(rep.matrix_order) +
                 ")");
  out.note("antisym " + fmt(anti) + ", jacobi " + fmt(jac) + ", bilinear " + fmt(bil));
}

// ---- criterion 6: one-step defect against the truncated modified field ----

void criterion_bch(Outcome& out) {
  const LinearSystem& sys = rotor_sys();
  const LieElement Y(sys.A, VecTrigPoly::zero(sys.omega(), Vec(4, 0.0)), 0.0);
  const LieElement Z(MatTrigPoly(sys.omega(), Matrix(4, 4)), sys.f, 1.0);
  const ExtState st{Vec(4, 0.0), 0.0};
  auto defect = [&](double h) {
    const LieElement mod = bch_modified_field(Y, Z, h);
    return norm2(vec_sub(strang_step(sys, h, st).x, flow_exact(mod, h, st).x));
  };
  const double d1 = defect(0.1), d2 = defect(0.05);
  const double ratio = d1 / d2;
  out.expect(ratio >= 24.0 && ratio <= 40.0,
             "defect ratio " + fmt(ratio) + " outside [24, 40]");
  out.note("defects " + fmt(d1) + " / " + fmt(d2) + ", ratio " + fmt(ratio));
}

// ---- criterion 7: oracle cross-validation ---------------------------------

void criterion_oracles(Outcome& out) {
  const rotor::RotorParams& p = bench_params();
  const LinearSystem& sys = rotor_sys();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 100.0 * (i + 1) / 1000.0;
    const Vec a = exact_reference(sys, ExtState{p.x0, 0.0}, t).x;
    const Vec b = rotor::closed_form_solution(p, t);
    worst = std::max(worst, max_abs(vec_sub(a, b)));
  }
  out.expect(worst <= 1e-10, "oracle disagreement " + fmt(worst) + " above 1e-10");

  const LinearSystem hom = sys.homogeneous();
  Rng rng(2);
  double strang_gap = 0.0;
  for (double h : {0.1, 0.3, 0.5}) {
    const Vec x = random_vec(rng, 4);
    const Vec a = strang_step(hom, h, ExtState{x, 0.0}).x;
    const Vec b = expm(h * sys.A.constant_coeff()).apply(x);
    strang_gap = std::max(strang_gap, max_abs(vec_sub(a, b)));
  }
  out.expect(strang_gap <= 1e-12,
             "unforced strang vs matrix exponential gap " + fmt(strang_gap) + " above 1e-12");
  out.note("oracle gap " + fmt(worst) + ", unforced strang gap " + fmt(strang_gap));
}

// ---- criterion 8: CLI contract --------------------------------------------

void criterion_cli(Outcome& out) {
  fs::path dir = fs::temp_directory_path() / ("liesplit_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };

  // byte determinism on the benchmark defaults
  const fs::path a = dir / "a.csv", b = dir / "b.csv";
  const std::string args = "simulate --rotor --method strang --h 0.05 --t-end 100 --out ";
  const CliResult r1 = run_cli(args + q(a));
  const CliResult r2 = run_cli(args + q(b));
  out.expect(r1.exit_code == 0 && r2.exit_code == 0, "simulate did not exit 0");
  out.expect(io::read_file(a.string()) == io::read_file(b.string()),
             "two identical simulate runs differ");

  // malformed inputs exit 2
  out.expect(run_cli("simulate --rotor --method bogus --h 0.1 --t-end 1 --out " +
                     q(dir / "x.csv")).exit_code == 2,
             "unknown method did not exit 2");
  out.expect(run_cli("compare --rotor --method exact --h 0.1 --t-end 400 --out " +
                     q(dir / "y.csv")).exit_code == 2,
             "single-method compare did not exit 2");
  out.expect(run_cli("convergence --rotor --h-list 0.1,0.05,0.03 --t-end 5").exit_code == 2,
             "non-halving h list did not exit 2");
  const fs::path broken = dir / "broken.json";
  io::write_file(broken.string(), "{not json");
  out.expect(run_cli("simulate --system " + q(broken) + " --method exact --h 0.1 --t-end 1 --out " +
                     q(dir / "z.csv")).exit_code == 2,
             "broken system file did not exit 2");

  // summary keys are the documented contract
  const fs::path csv = dir / "cmp.csv", summary = dir / "cmp.json";
  const CliResult rc = run_cli("compare --rotor --h 0.5 --t-end 400 --out " + q(csv) +
                               " --summary " + q(summary));
  out.expect(rc.exit_code == 0, "compare did not exit 0");
  if (rc.exit_code == 0) {
    const json s = json::parse(io::read_file(summary.string()));
    for (const char* key : {"h", "t0", "t_end", "methods"})
      out.expect(s.contains(key), std::string("summary missing key ") + key);
    for (const char* m : {"exact", "strang", "midpoint", "heun", "sdirk2"}) {
      out.expect(s.at("methods").contains(m), std::string("summary missing method ") + m);
      for (const char* key :
           {"envelope", "final_time_error", "max_symplectic_defect", "transfer_spectral_radius"})
        out.expect(s.at("methods").at(m).contains(key),
                   std::string("summary method entry missing key ") + key);
    }
  }

  const CliResult rv = run_cli("convergence --rotor --h-list 0.1,0.05,0.025 --t-end 5");
  out.expect(rv.exit_code == 0, "convergence did not exit 0");
  if (rv.exit_code == 0) {
    const json v = json::parse(rv.output);
    for (const char* m : {"strang", "midpoint", "heun", "sdirk2"}) {
      out.expect(v.contains(m), std::string("convergence report missing ") + m);
      if (v.contains(m)) {
        out.expect(v.at(m).contains("slope"), "convergence entry missing slope");
        for (const char* h : {"0.1", "0.05", "0.025"})
          out.expect(v.at(m).contains(h), std::string("convergence entry missing h key ") + h);
      }
    }
  }

  const CliResult ra = run_cli("algebra-check --rotor --seed 0");
  out.expect(ra.exit_code == 0, "algebra-check did not exit 0");
  if (ra.exit_code == 0) {
    const json g = json::parse(ra.output);
    for (const char* key : {"algebra", "n", "omega", "seed", "dimension", "hamiltonian_defect",
                            "hamiltonian_check_skipped", "closure", "jacobi_max", "bch_order2"})
      out.expect(g.contains(key), std::string("algebra-check missing key ") + key);
    out.expect(g.at("dimension") == 23, "algebra-check dimension != 23");
  }

  std::error_code ec;
  fs::remove_all(dir, ec);
}

struct Criterion {
  int id;
  std::string label;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

  const std::vector<Criterion> criteria{
      {1, "resonant beat envelope from both exact oracles", 1.0, criterion_envelope},
      {2, "second-order convergence of all four steppers", 5.0, criterion_orders},
      {3, "structure preservation of the transfer matrices", 5.0, criterion_structure},
      {4, "long coarse-step run separates method classes", 10.0, criterion_longrun},
      {5, "Lie-algebra bracket, closure and dimension suite", 5.0, criterion_lie},
      {6, "fifth-order one-step defect against the modified field", 2.0, criterion_bch},
      {7, "cross-validation of the exact oracles", 5.0, criterion_oracles},
      {8, "CLI determinism, exit codes and report keys", 30.0, criterion_cli},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds)
      out.expect(false, "runtime " + fmt(secs) + " s exceeded budget " + fmt(c.budget_seconds) + " s");

    std::ostringstream line;
    line << "criterion " << c.id << " [" << (out.pass ? "PASS" : "FAIL") << "] " << c.label << " ("
         << fmt(secs) << " s)";
    for (const std::string& n : out.notes) line << "\n    - " << n;
    std::puts(line.str().c_str());
    if (!out.pass) ++failures;
  }

  if (failures == 0)
    std::puts("acceptance: all criteria passed");
  else
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures;
}
