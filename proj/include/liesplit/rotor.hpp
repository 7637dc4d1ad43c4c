#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "liesplit/integrators.hpp"

namespace liesplit {
namespace rotor {

/// Parameters of the planar unbalanced-rotor benchmark: a disc on a shaft
/// spinning at rate omega, held by a linear bearing of stiffness k. The state
/// is (q1, q2, p1, p2): transverse positions of the shaft and their momenta.
struct RotorParams {
  double m = 1.0;      // total mass [kg]
  double k = 1.0;      // bearing stiffness [N/m]
  double omega = 1.02;  // shaft rate [rad/s]
  double eps = 0.1;    // unbalance magnitude [m kg]
  Vec x0 = Vec(4, 0.0);

  double natural_frequency() const { return std::sqrt(k / m); }

  /// Period of the slow amplitude modulation 2 pi / |omega - w|.
  double beat_period() const {
    const double w = natural_frequency();
    return 2.0 * std::numbers::pi / std::abs(omega - w);
  }
};

inline void validate(const RotorParams& p) {
  if (!(p.m > 0.0)) throw invalid_input("rotor: mass must be positive");
  if (!(p.k > 0.0)) throw invalid_input("rotor: stiffness must be positive");
  if (!(p.omega > 0.0)) throw invalid_input("rotor: shaft rate must be positive");
  if (!(p.eps >= 0.0)) throw invalid_input("rotor: unbalance must be nonnegative");
  if (p.x0.size() != 4) throw invalid_input("rotor: initial state must have dimension 4");
}

/// The rotor as a periodic linear system: constant Hamiltonian matrix
///
///   A = [[0, 0, 1/m, 0], [0, 0, 0, 1/m], [-k, 0, 0, 0], [0, -k, 0, 0]]
///
/// and the centrifugal forcing f(t) = eps omega^2 (0, 0, -cos(omega t),
/// sin(omega t)); tagged symplectic on R^4.
inline LinearSystem build(const RotorParams& p) {
  validate(p);
  const Matrix A{{0.0, 0.0, 1.0 / p.m, 0.0},
                 {0.0, 0.0, 0.0, 1.0 / p.m},
                 {-p.k, 0.0, 0.0, 0.0},
                 {0.0, -p.k, 0.0, 0.0}};
  const double amp = p.eps * p.omega * p.omega;
  VecTrigPoly f(p.omega, Vec(4, 0.0), {Vec{0.0, 0.0, -amp, 0.0}}, {Vec{0.0, 0.0, 0.0, amp}});
  return LinearSystem(MatTrigPoly(p.omega, A), std::move(f), MatrixAlgebra::symplectic);
}

/// The sub-algebra the rotor field lives in: constant symplectic matrix part,
/// single-harmonic forcing.
inline AlgebraSpec algebra_spec(const RotorParams& p) {
  return AlgebraSpec{MatrixAlgebra::symplectic, 4, p.omega, 1, 0};
}

/// Forced-response amplitude C = (eps/m) omega^2 / (omega^2 - w^2) of each
/// transverse component, signed.
inline double response_coefficient(const RotorParams& p) {
  const double w = p.natural_frequency();
  const double det = p.omega * p.omega - w * w;
  if (std::abs(p.omega - w) < 1e-9 * w)
    throw invalid_input("rotor: forcing is within 1e-9 of resonance; no closed form here");
  return (p.eps / p.m) * p.omega * p.omega / det;
}

/// Peak of the beat envelope, 2 (eps/m) omega^2 / |omega^2 - w^2|.
inline double exact_envelope(const RotorParams& p) { return 2.0 * std::abs(response_coefficient(p)); }

/// Closed-form solution by variation of constants: the two transverse
/// components are uncoupled forced oscillators, the momenta follow by
/// differentiation and the initial state enters through the homogeneous
/// rotation.
inline Vec closed_form_solution(const RotorParams& p, double t) {
  validate(p);
  const double w = p.natural_frequency();
  const double C = response_coefficient(p);
  const double W = p.omega;
  const double cw = std::cos(w * t), sw = std::sin(w * t);
  const double cW = std::cos(W * t), sW = std::sin(W * t);

  // forced response from rest
  const double q1p = C * (cW - cw);
  const double p1p = p.m * C * (w * sw - W * sW);
  const double q2p = C * ((W / w) * sw - sW);
  const double p2p = p.m * C * W * (cw - cW);

  // homogeneous rotation of the initial state
  const double q10 = p.x0[0], q20 = p.x0[1], p10 = p.x0[2], p20 = p.x0[3];
  const double mw = p.m * w;
  const double q1h = q10 * cw + p10 / mw * sw;
  const double p1h = -mw * q10 * sw + p10 * cw;
  const double q2h = q20 * cw + p20 / mw * sw;
  const double p2h = -mw * q20 * sw + p20 * cw;

  return Vec{q1h + q1p, q2h + q2p, p1h + p1p, p2h + p2p};
}

/// Largest |x_component| over the trajectory. The caller states the span the
/// measurement needs (one beat period for resonance work); shorter
/// trajectories are rejected.
inline double envelope_amplitude(const Trajectory& traj, std::size_t component,
                                 double required_span) {
  if (traj.size() == 0) throw invalid_input("envelope_amplitude: empty trajectory");
  if (component >= traj.states.front().size())
    throw invalid_input("envelope_amplitude: component out of range");
  const double span = traj.times.back() - traj.times.front();
  if (span < required_span)
    throw invalid_input("envelope_amplitude: trajectory spans " + std::to_string(span) +
                        " but at least " + std::to_string(required_span) +
                        " (one beat period) is required");
  double m = 0.0;
  for (const Vec& x : traj.states) m = std::max(m, std::abs(x[component]));
  return m;
}

struct SweepPoint {
  double omega = 0.0;
  std::optional<double> envelope;  // empty when this grid point failed
  double exact_envelope = 0.0;
  std::string note;
};

/// Integrate the rotor across a grid of shaft rates and record the measured
/// q1 envelope next to the closed-form envelope. Failures at single grid
/// points are recorded and the sweep continues.
inline std::vector<SweepPoint> resonance_sweep(const RotorParams& base,
                                               const std::vector<double>& omega_grid, Method m,
                                               double h, double t_end) {
  std::vector<SweepPoint> rows;
  rows.reserve(omega_grid.size());
  for (double W : omega_grid) {
    SweepPoint row;
    row.omega = W;
    RotorParams p = base;
    p.omega = W;
    try {
      row.exact_envelope = exact_envelope(p);
      const LinearSystem sys = build(p);
      const Trajectory traj = integrate(m, sys, p.x0, 0.0, t_end, h);
      row.envelope = envelope_amplitude(traj, 0, p.beat_period());
    } catch (const error& e) {
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rotor
}  // namespace liesplit
