#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liesplit/lie_algebra.hpp"
#include "liesplit/linalg.hpp"

namespace liesplit {

enum class Method { exact, strang, midpoint, heun, sdirk2 };

inline constexpr std::array<std::string_view, 5> method_registry = {"exact", "strang", "midpoint",
                                                                    "heun", "sdirk2"};

inline std::string_view method_name(Method m) {
  return method_registry[static_cast<std::size_t>(m)];
}

inline Method parse_method(std::string_view name) {
  for (std::size_t i = 0; i < method_registry.size(); ++i)
    if (name == method_registry[i]) return static_cast<Method>(i);
  std::string msg = "unknown method '" + std::string(name) + "'; available:";
  for (auto r : method_registry) msg += " " + std::string(r);
  throw invalid_input(msg);
}

/// The system xdot = A(t) x + f(t) with periodic coefficients of shared base
/// frequency. The algebra tag records which matrix algebra A is declared to
/// take values in; it drives diagnostics, it is not enforced on construction
/// so that violations can be reported rather than rejected.
struct LinearSystem {
  LinearSystem(MatTrigPoly A_, VecTrigPoly f_,
               MatrixAlgebra algebra_ = MatrixAlgebra::general_linear)
      : A(std::move(A_)), f(std::move(f_)), algebra(algebra_) {
    check_same_frequency(A.omega(), f.omega());
    if (!A.constant_coeff().is_square())
      throw invalid_input("LinearSystem: matrix part must be square");
    if (A.constant_coeff().rows() != f.constant_coeff().size())
      throw invalid_input("LinearSystem: matrix and vector dimensions differ");
  }

  double omega() const { return A.omega(); }
  std::size_t dim() const { return f.constant_coeff().size(); }
  bool constant_matrix() const { return A.trimmed_order() == 0; }

  LinearSystem homogeneous() const {
    return LinearSystem(A, VecTrigPoly::zero(f.omega(), f.constant_coeff()), algebra);
  }

  /// The extended-space field (A(t) x + f(t), 1).
  LieElement field() const { return LieElement(A, f, 1.0); }

  MatTrigPoly A;
  VecTrigPoly f;
  MatrixAlgebra algebra;
};

/// Point (x, t) on the extended phase space.
struct ExtState {
  Vec x;
  double t = 0.0;
};

struct Trajectory {
  std::string method;
  double step_size = 0.0;
  std::string system_label;  // free-form provenance, never written to data files
  std::vector<double> times;
  std::vector<Vec> states;

  std::size_t size() const { return times.size(); }
  const Vec& back_state() const { return states.back(); }
};

namespace detail {

inline const Matrix& require_constant_matrix(const LinearSystem& sys, const char* who) {
  if (!sys.constant_matrix())
    throw invalid_input(std::string(who) + ": requires a constant (order-0) matrix part");
  return sys.A.constant_coeff();
}

/// Generator of the autonomous augmentation z = (x, c_1, s_1, ..., c_k, s_k, u)
/// with c_i = cos(i w t), s_i = sin(i w t), u = 1 and t advancing at rate
/// alpha. The harmonic block rotates at rate i*w*alpha; the forcing
/// coefficients sit in the columns that multiply the harmonics.
inline Matrix augmented_generator(const Matrix& A0, const VecTrigPoly& f, double alpha) {
  const std::size_t n = A0.rows();
  const int k = f.order();
  const std::size_t N = n + 2 * static_cast<std::size_t>(k) + 1;
  Matrix M(N, N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = A0(i, j);
  for (int i = 1; i <= k; ++i) {
    const std::size_t ci = n + 2 * static_cast<std::size_t>(i - 1);
    const std::size_t si = ci + 1;
    const Vec& ac = f.cos_coeff(i);
    const Vec& as = f.sin_coeff(i);
    for (std::size_t r = 0; r < n; ++r) {
      M(r, ci) = ac[r];
      M(r, si) = as[r];
    }
    const double w = i * f.omega() * alpha;
    M(ci, si) = -w;
    M(si, ci) = w;
  }
  const Vec& a0 = f.constant_coeff();
  for (std::size_t r = 0; r < n; ++r) M(r, N - 1) = a0[r];
  return M;
}

inline Vec augmented_state(const Vec& x, double t, const VecTrigPoly& f) {
  const int k = f.order();
  Vec z(x.size() + 2 * static_cast<std::size_t>(k) + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i];
  for (int i = 1; i <= k; ++i) {
    const double phase = i * f.omega() * t;
    z[x.size() + 2 * static_cast<std::size_t>(i - 1)] = std::cos(phase);
    z[x.size() + 2 * static_cast<std::size_t>(i - 1) + 1] = std::sin(phase);
  }
  z.back() = 1.0;
  return z;
}

inline void check_state(const LinearSystem& sys, const ExtState& st) {
  if (st.x.size() != sys.dim()) throw invalid_input("stepper: state dimension mismatch");
}

}  // namespace detail

/// Exact flow of a constant-matrix element (A, f, alpha) for time s, via the
/// exponential of the autonomous augmented system.
inline ExtState flow_exact(const LieElement& el, double s, const ExtState& st) {
  if (el.A.trimmed_order() != 0)
    throw invalid_input("flow_exact: requires a constant (order-0) matrix part");
  if (st.x.size() != el.dim()) throw invalid_input("flow_exact: state dimension mismatch");
  const Matrix M = detail::augmented_generator(el.A.eval(0.0), el.f, el.alpha);
  const Matrix E = expm(s * M);
  const Vec z = detail::augmented_state(st.x, st.t, el.f);
  const Vec zn = E.apply(z);
  Vec x(st.x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = zn[i];
  return {std::move(x), st.t + el.alpha * s};
}

/// Exact solution operator of the full system over time s; requires a
/// constant matrix part but any finite forcing order.
inline ExtState exact_reference(const LinearSystem& sys, const ExtState& st, double s) {
  detail::require_constant_matrix(sys, "exact_reference");
  detail::check_state(sys, st);
  return flow_exact(sys.field(), s, st);
}

/// Exact flow of the splitting field Y = (A x, 0): x <- expm(sA) x, t fixed.
inline ExtState flow_A_exact(const LinearSystem& sys, double s, const ExtState& st) {
  const Matrix& A0 = detail::require_constant_matrix(sys, "flow_A_exact");
  detail::check_state(sys, st);
  return {expm(s * A0).apply(st.x), st.t};
}

/// Exact flow of the splitting field Z = (f(t), 1): x picks up the exact
/// integral of f over [t, t+s], t advances by s.
inline ExtState flow_f_exact(const LinearSystem& sys, double s, const ExtState& st) {
  detail::check_state(sys, st);
  Vec x = st.x;
  add_scaled(x, 1.0, integral_over_step(sys.f, st.t, s));
  return {std::move(x), st.t + s};
}

/// Symmetric splitting step phi_Y^(h/2) o phi_Z^h o phi_Y^(h/2). Both
/// sub-flows are exact, so the composite map stays in the structure group.
inline ExtState strang_step(const LinearSystem& sys, double h, const ExtState& st) {
  const ExtState a = flow_A_exact(sys, 0.5 * h, st);
  const ExtState b = flow_f_exact(sys, h, a);
  ExtState c = flow_A_exact(sys, 0.5 * h, b);
  c.t = st.t + h;
  return c;
}

/// Implicit midpoint: (I - h/2 A(tm)) x1 = (I + h/2 A(tm)) x + h f(tm) with
/// tm = t + h/2.
inline ExtState implicit_midpoint_step(const LinearSystem& sys, double h, const ExtState& st) {
  detail::check_state(sys, st);
  const std::size_t n = sys.dim();
  const double tm = st.t + 0.5 * h;
  const Matrix Am = sys.A.eval(tm);
  const Matrix I = Matrix::identity(n);
  Vec rhs = (I + (0.5 * h) * Am).apply(st.x);
  add_scaled(rhs, h, sys.f.eval(tm));
  Vec x = lin_solve(I - (0.5 * h) * Am, rhs);
  return {std::move(x), st.t + h};
}

/// Explicit trapezoidal Runge-Kutta (Heun) on the extended system.
inline ExtState heun_step(const LinearSystem& sys, double h, const ExtState& st) {
  detail::check_state(sys, st);
  Vec k1 = sys.A.eval(st.t).apply(st.x);
  add_scaled(k1, 1.0, sys.f.eval(st.t));
  Vec xp = st.x;
  add_scaled(xp, h, k1);
  const double t1 = st.t + h;
  Vec k2 = sys.A.eval(t1).apply(xp);
  add_scaled(k2, 1.0, sys.f.eval(t1));
  Vec x = st.x;
  add_scaled(x, 0.5 * h, k1);
  add_scaled(x, 0.5 * h, k2);
  return {std::move(x), st.t + h};
}

/// Stage parameter of the two-stage, stiffly accurate, L-stable SDIRK pair
/// c = (gamma, 1), b = (1-gamma, gamma). Stability function
/// R(z) = (1 + (1-2 gamma) z) / (1 - gamma z)^2.
inline constexpr double sdirk_gamma = 1.0 + std::numbers::sqrt2 / 2.0;

/// Two-stage L-stable SDIRK step of order two; strictly dissipative on
/// oscillatory spectra, which is the behaviour this method is here to model.
inline ExtState dissipative_irk2_step(const LinearSystem& sys, double h, const ExtState& st) {
  detail::check_state(sys, st);
  const std::size_t n = sys.dim();
  const double g = sdirk_gamma;
  const Matrix I = Matrix::identity(n);
  const double t1 = st.t + g * h;
  const double t2 = st.t + h;
  const Matrix A1 = sys.A.eval(t1);
  const Matrix A2 = sys.A.eval(t2);

  Vec r1 = st.x;
  add_scaled(r1, g * h, sys.f.eval(t1));
  const Vec X1 = lin_solve(I - (g * h) * A1, r1);

  Vec k1 = A1.apply(X1);
  add_scaled(k1, 1.0, sys.f.eval(t1));

  Vec r2 = st.x;
  add_scaled(r2, (1.0 - g) * h, k1);
  add_scaled(r2, g * h, sys.f.eval(t2));
  Vec x = lin_solve(I - (g * h) * A2, r2);  // stiffly accurate: x1 = X2
  return {std::move(x), st.t + h};
}

inline ExtState step(Method m, const LinearSystem& sys, double h, const ExtState& st) {
  switch (m) {
    case Method::exact: return exact_reference(sys, st, h);
    case Method::strang: return strang_step(sys, h, st);
    case Method::midpoint: return implicit_midpoint_step(sys, h, st);
    case Method::heun: return heun_step(sys, h, st);
    case Method::sdirk2: return dissipative_irk2_step(sys, h, st);
  }
  throw invalid_input("step: unknown method");
}

/// Repeated stepping from (x0, t0) to t_end on the uniform grid t0 + i*h; a
/// final shorter step lands exactly on t_end when the span is not a multiple
/// of h. Step failures carry the index of the failed step.
inline Trajectory integrate(Method m, const LinearSystem& sys, const Vec& x0, double t0,
                            double t_end, double h) {
  if (x0.size() != sys.dim()) throw invalid_input("integrate: initial state dimension mismatch");
  if (!(h > 0.0)) throw invalid_input("integrate: step size must be positive");
  if (t_end < t0) throw invalid_input("integrate: t_end must not precede t0");
  const double span = t_end - t0;
  const double steps_real = span / h;
  if (steps_real > 1e8) throw invalid_input("integrate: step budget (1e8) exceeded");

  std::size_t n_full = static_cast<std::size_t>(std::floor(steps_real + 1e-9));
  double rem = t_end - (t0 + static_cast<double>(n_full) * h);
  if (rem <= 1e-12 * std::max(1.0, std::abs(t_end))) rem = 0.0;

  Trajectory traj;
  traj.method = std::string(method_name(m));
  traj.step_size = h;
  traj.times.reserve(n_full + 2);
  traj.states.reserve(n_full + 2);
  traj.times.push_back(t0);
  traj.states.push_back(x0);

  // the exact propagator over a fixed step is one matrix, build it once
  std::optional<Matrix> exact_prop;
  if (m == Method::exact) {
    const Matrix& A0 = detail::require_constant_matrix(sys, "integrate(exact)");
    exact_prop = expm(h * detail::augmented_generator(A0, sys.f, 1.0));
  }

  auto advance = [&](const ExtState& st, double dt, std::size_t index) -> Vec {
    try {
      if (exact_prop) {
        const Matrix& E =
            (dt == h) ? *exact_prop
                      : expm(dt * detail::augmented_generator(sys.A.eval(0.0), sys.f, 1.0));
        const Vec z = E.apply(detail::augmented_state(st.x, st.t, sys.f));
        return Vec(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(sys.dim()));
      }
      return step(m, sys, dt, st).x;
    } catch (const error& e) {
      throw step_error(index, "step " + std::to_string(index) + " failed: " + e.what());
    }
  };

  for (std::size_t i = 0; i < n_full; ++i) {
    const ExtState st{traj.states.back(), traj.times.back()};
    Vec x = advance(st, h, i);
    traj.times.push_back(t0 + static_cast<double>(i + 1) * h);
    traj.states.push_back(std::move(x));
  }
  if (rem > 0.0) {
    const ExtState st{traj.states.back(), traj.times.back()};
    Vec x = advance(st, rem, n_full);
    traj.times.push_back(t_end);
    traj.states.push_back(std::move(x));
  }
  return traj;
}

/// The linear part M of one step at time t: columns are the images of the
/// basis vectors under the stepper with the forcing zeroed.
inline Matrix transfer_matrix(Method m, const LinearSystem& sys, double t, double h) {
  const LinearSystem hom = sys.homogeneous();
  const std::size_t n = sys.dim();
  Matrix M(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    const Vec col = step(m, hom, h, ExtState{std::move(e), t}).x;
    for (std::size_t i = 0; i < n; ++i) M(i, j) = col[i];
  }
  return M;
}

/// Transfer matrix of one step together with its structural diagnostics. The
/// symplectic defect is only defined in even dimension.
struct StepReport {
  Matrix transfer;
  std::optional<double> symplectic_defect;
  double spectral_radius = 0.0;
};

inline StepReport step_report(Method m, const LinearSystem& sys, double t, double h) {
  StepReport rep{transfer_matrix(m, sys, t, h), std::nullopt, 0.0};
  if (sys.dim() % 2 == 0)
    rep.symplectic_defect = liesplit::symplectic_defect(rep.transfer, SymplecticForm(sys.dim()));
  rep.spectral_radius = liesplit::spectral_radius(rep.transfer);
  return rep;
}

struct ConvergenceResult {
  std::vector<std::pair<double, double>> errors;  // (h, global error at t_end)
  std::vector<std::pair<double, double>> used;    // points above the error floor
  double slope = 0.0;
};

/// Observed global order: least-squares slope of log(error) against log(h)
/// over a list of halving step sizes, with errors measured against the exact
/// propagator at t_end. Errors at or below 1e-12 are excluded as roundoff.
inline ConvergenceResult convergence_order(Method m, const LinearSystem& sys, const Vec& x0,
                                           double t0, double t_end,
                                           const std::vector<double>& h_list) {
  if (h_list.size() < 3) throw invalid_input("convergence_order: need at least 3 step sizes");
  for (std::size_t i = 0; i + 1 < h_list.size(); ++i)
    if (std::abs(h_list[i + 1] - 0.5 * h_list[i]) > 1e-12 * h_list[i])
      throw invalid_input("convergence_order: step sizes must halve");

  const Vec ref = exact_reference(sys, ExtState{x0, t0}, t_end - t0).x;
  ConvergenceResult res;
  for (double h : h_list) {
    const Trajectory traj = integrate(m, sys, x0, t0, t_end, h);
    const double err = norm2(vec_sub(traj.back_state(), ref));
    res.errors.emplace_back(h, err);
    if (err > 1e-12) res.used.emplace_back(h, err);
  }
  if (res.used.size() < 2)
    throw convergence_error("convergence_order: too few errors above the 1e-12 floor");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [h, e] : res.used) {
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(res.used.size());
  res.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  return res;
}

}  // namespace liesplit
