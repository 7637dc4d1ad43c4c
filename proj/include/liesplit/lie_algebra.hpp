#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "liesplit/trigpoly.hpp"

namespace liesplit {

enum class MatrixAlgebra { general_linear, symplectic, zero };

inline std::string_view algebra_name(MatrixAlgebra g) {
  switch (g) {
    case MatrixAlgebra::general_linear: return "general-linear";
    case MatrixAlgebra::symplectic: return "symplectic";
    case MatrixAlgebra::zero: return "zero";
  }
  return "general-linear";
}

inline MatrixAlgebra parse_algebra(std::string_view s) {
  if (s == "general-linear" || s == "gl") return MatrixAlgebra::general_linear;
  if (s == "symplectic" || s == "sp") return MatrixAlgebra::symplectic;
  if (s == "zero") return MatrixAlgebra::zero;
  throw invalid_input("unknown matrix algebra '" + std::string(s) +
                      "' (expected general-linear, symplectic or zero)");
}

/// A triple (A, f, alpha) representing the vector field
///   X(x, t) = (A(t) x + f(t), alpha)
/// on the extended phase space. A and f share the base frequency and the
/// phase-space dimension n.
struct LieElement {
  LieElement(MatTrigPoly A_, VecTrigPoly f_, double alpha_)
      : A(std::move(A_)), f(std::move(f_)), alpha(alpha_) {
    check_same_frequency(A.omega(), f.omega());
    if (!A.constant_coeff().is_square())
      throw invalid_input("LieElement: matrix part must be square");
    if (A.constant_coeff().rows() != f.constant_coeff().size())
      throw invalid_input("LieElement: matrix and vector dimensions differ");
    if (!std::isfinite(alpha)) throw invalid_input("LieElement: non-finite alpha");
  }

  std::size_t dim() const { return f.constant_coeff().size(); }
  double omega() const { return A.omega(); }

  MatTrigPoly A;
  VecTrigPoly f;
  double alpha;
};

/// Field evaluation: (A(t) x + f(t), alpha).
inline std::pair<Vec, double> eval_field(const LieElement& el, const Vec& x, double t) {
  if (x.size() != el.dim()) throw invalid_input("eval_field: state dimension mismatch");
  Vec v = el.A.eval(t).apply(x);
  add_scaled(v, 1.0, el.f.eval(t));
  return {std::move(v), el.alpha};
}

inline LieElement element_combo(double a, const LieElement& X, double b, const LieElement& Y) {
  return LieElement(linear_combo(a, X.A, b, Y.A), linear_combo(a, X.f, b, Y.f),
                    a * X.alpha + b * Y.alpha);
}

inline LieElement operator+(const LieElement& X, const LieElement& Y) {
  return element_combo(1.0, X, 1.0, Y);
}

/// Bracket of two elements:
///
///   [(A,f,alpha), (B,g,beta)] = (AB - BA + beta A' - alpha B',
///                                 Ag - Bf + beta f' - alpha g', 0)
///
/// computed exactly in trig-polynomial arithmetic. Terms are paired so that
/// swapping the arguments negates every coefficient bitwise, making
/// antisymmetry exact.
inline LieElement bracket(const LieElement& X, const LieElement& Y) {
  const MatTrigPoly comm = linear_combo(1.0, product(X.A, Y.A), -1.0, product(Y.A, X.A));
  const MatTrigPoly drift = linear_combo(Y.alpha, X.A.derivative(), -X.alpha, Y.A.derivative());
  MatTrigPoly mat = linear_combo(1.0, comm, 1.0, drift);

  const VecTrigPoly push = linear_combo(1.0, product(X.A, Y.f), -1.0, product(Y.A, X.f));
  const VecTrigPoly fdot = linear_combo(Y.alpha, X.f.derivative(), -X.alpha, Y.f.derivative());
  VecTrigPoly vec = linear_combo(1.0, push, 1.0, fdot);

  return LieElement(std::move(mat), std::move(vec), 0.0);
}

/// Sup over coefficient blocks of Frobenius/Euclidean norms, and |alpha|.
inline double element_norm(const LieElement& el) {
  return std::max({el.A.max_coeff_norm(), el.f.max_coeff_norm(), std::abs(el.alpha)});
}

/// Norm of [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]].
inline double jacobi_defect(const LieElement& X, const LieElement& Y, const LieElement& Z) {
  const LieElement s = element_combo(1.0, bracket(X, bracket(Y, Z)), 1.0, bracket(Y, bracket(Z, X)));
  return element_norm(element_combo(1.0, s, 1.0, bracket(Z, bracket(X, Y))));
}

/// Identifies a sub-algebra: the matrix algebra, the phase-space dimension,
/// the base frequency, the vector-part order bound k and the matrix-part
/// order bound l (nullopt marks the unbounded case).
struct AlgebraSpec {
  MatrixAlgebra algebra = MatrixAlgebra::general_linear;
  std::size_t n = 0;
  double omega = 1.0;
  int vec_order = 0;
  std::optional<int> mat_order = 0;
};

inline std::int64_t algebra_dim(MatrixAlgebra g, std::size_t n) {
  switch (g) {
    case MatrixAlgebra::general_linear: return static_cast<std::int64_t>(n) * n;
    case MatrixAlgebra::symplectic: {
      if (n % 2 != 0) throw invalid_input("algebra_dim: sp requires even dimension");
      const std::int64_t d = static_cast<std::int64_t>(n) / 2;
      return d * (2 * d + 1);
    }
    case MatrixAlgebra::zero: return 0;
  }
  return 0;
}

/// Dimension (2l+1) dim g + (2k+1) n + 1 of the sub-algebra identified by the
/// spec; nullopt when the matrix order is unbounded (infinite dimension).
inline std::optional<std::int64_t> dimension(const AlgebraSpec& spec) {
  if (!spec.mat_order) return std::nullopt;
  const std::int64_t l = *spec.mat_order;
  const std::int64_t k = spec.vec_order;
  const std::int64_t n = static_cast<std::int64_t>(spec.n);
  return (2 * l + 1) * algebra_dim(spec.algebra, spec.n) + (2 * k + 1) * n + 1;
}

/// Result of checking bracket(X, Y) against a declared sub-algebra: (a) does
/// the matrix part stay in the matrix algebra, (b) does its order stay within
/// the matrix bound, (c) does the vector order stay within the vector bound,
/// (d) is the time component zero.
struct ClosureReport {
  bool matrix_in_algebra = true;
  bool algebra_check_applicable = false;
  double matrix_algebra_defect = 0.0;
  bool matrix_order_ok = true;
  int matrix_order = 0;
  bool vector_order_ok = true;
  int vector_order = 0;
  bool alpha_zero = true;
  double alpha_value = 0.0;

  bool pass() const {
    return matrix_in_algebra && matrix_order_ok && vector_order_ok && alpha_zero;
  }
};

inline ClosureReport closure_check(const LieElement& X, const LieElement& Y,
                                   const AlgebraSpec& spec) {
  const LieElement br = bracket(X, Y);
  ClosureReport rep;
  rep.matrix_order = br.A.trimmed_order();
  rep.vector_order = br.f.trimmed_order();
  rep.matrix_order_ok = !spec.mat_order || rep.matrix_order <= *spec.mat_order;
  rep.vector_order_ok = rep.vector_order <= spec.vec_order;
  rep.alpha_value = br.alpha;
  rep.alpha_zero = (br.alpha == 0.0);

  if (spec.algebra == MatrixAlgebra::symplectic) {
    rep.algebra_check_applicable = true;
    const SymplecticForm J(spec.n);
    // 16 equispaced sample times over one period; a trig polynomial of
    // modest order vanishing at all of them vanishes identically
    const double period = 2.0 * std::numbers::pi / spec.omega;
    double worst = 0.0;
    for (int j = 0; j < 16; ++j)
      worst = std::max(worst, hamiltonian_defect(br.A.eval(j * period / 16.0), J));
    rep.matrix_algebra_defect = worst;
    rep.matrix_in_algebra = worst <= 1e-11;
  } else if (spec.algebra == MatrixAlgebra::zero) {
    rep.algebra_check_applicable = true;
    rep.matrix_algebra_defect = br.A.max_coeff_norm();
    rep.matrix_in_algebra = rep.matrix_algebra_defect <= 1e-11;
  }
  return rep;
}

/// One term of the modified-field series of the symmetric composition
/// phi_Y^(h/2) o phi_Z^h o phi_Y^(h/2): the modified field is
/// sum_j h^order_j * element_j.
struct BchTerm {
  int order;
  LieElement element;
};

inline constexpr double bch_c1 = 1.0 / 12.0;   // weight of [Z,[Z,Y]]
inline constexpr double bch_c2 = -1.0 / 24.0;  // weight of [Y,[Y,Z]]

/// Series of the modified field for the symmetric splitting composition,
/// truncated after the h^2 term: order 0 is Y+Z, order 2 is
/// c1 [Z,[Z,Y]] + c2 [Y,[Y,Z]] with (c1, c2) = (1/12, -1/24).
inline std::vector<BchTerm> bch_modified_element(const LieElement& Y, const LieElement& Z) {
  const LieElement yz = bracket(Y, Z);
  const LieElement zzy = bracket(Z, bracket(Z, Y));
  const LieElement yyz = bracket(Y, yz);
  std::vector<BchTerm> terms;
  terms.push_back({0, element_combo(1.0, Y, 1.0, Z)});
  terms.push_back({2, element_combo(bch_c1, zzy, bch_c2, yyz)});
  return terms;
}

/// The assembled modified field (Y+Z) + h^2 (c1 [Z,[Z,Y]] + c2 [Y,[Y,Z]]).
inline LieElement bch_modified_field(const LieElement& Y, const LieElement& Z, double h) {
  const std::vector<BchTerm> terms = bch_modified_element(Y, Z);
  LieElement r = terms[0].element;
  for (std::size_t i = 1; i < terms.size(); ++i)
    r = element_combo(1.0, r, std::pow(h, terms[i].order), terms[i].element);
  return r;
}

}  // namespace liesplit
