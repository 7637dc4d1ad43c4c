#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "liesplit/matrix.hpp"

namespace liesplit {

// Coefficient-block helpers shared by vector- and matrix-valued polynomials.
inline bool same_shape(const Vec& a, const Vec& b) { return a.size() == b.size(); }
inline bool same_shape(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}
inline Vec zero_like(const Vec& v) { return Vec(v.size(), 0.0); }
inline Matrix zero_like(const Matrix& m) { return Matrix(m.rows(), m.cols()); }
inline void add_scaled(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
inline void add_scaled(Matrix& y, double a, const Matrix& x) {
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += a * x(i, j);
}
inline double block_norm(const Vec& v) { return norm2(v); }
inline double block_norm(const Matrix& m) { return m.frobenius_norm(); }
inline double block_max_abs(const Vec& v) { return max_abs(v); }
inline double block_max_abs(const Matrix& m) { return m.max_abs(); }
inline bool block_finite(const Vec& v) { return all_finite(v); }
inline bool block_finite(const Matrix& m) { return all_finite(m.entries()); }

inline void check_same_frequency(double wa, double wb) {
  if (std::abs(wa - wb) > 1e-12 * std::max(std::abs(wa), std::abs(wb)))
    throw frequency_error("base frequency mismatch: " + std::to_string(wa) + " vs " +
                          std::to_string(wb));
}

/// Trigonometric polynomial with base frequency omega and finite order k:
///
///   p(t) = a0 + sum_{i=1..k} a_i cos(i omega t) + b_i sin(i omega t)
///
/// The coefficient blocks are vectors or square matrices. Storage holds
/// exactly 2k+1 blocks. All operations are exact in the coefficients; in
/// particular products never alias or truncate, the result order is the sum
/// of the operand orders.
template <class C>
class TrigPoly {
 public:
  TrigPoly(double omega, C constant) : omega_(omega) {
    cos_.push_back(std::move(constant));
    validate();
  }

  TrigPoly(double omega, C constant, std::vector<C> cos_coeffs, std::vector<C> sin_coeffs)
      : omega_(omega) {
    if (cos_coeffs.size() != sin_coeffs.size())
      throw invalid_input("TrigPoly: cos/sin coefficient counts differ");
    cos_.reserve(cos_coeffs.size() + 1);
    cos_.push_back(std::move(constant));
    for (auto& c : cos_coeffs) cos_.push_back(std::move(c));
    sin_ = std::move(sin_coeffs);
    validate();
  }

  static TrigPoly zero(double omega, const C& prototype) {
    return TrigPoly(omega, zero_like(prototype));
  }

  double omega() const { return omega_; }
  int order() const { return static_cast<int>(cos_.size()) - 1; }

  const C& constant_coeff() const { return cos_[0]; }
  /// i in 1..order()
  const C& cos_coeff(int i) const { return cos_[static_cast<std::size_t>(i)]; }
  const C& sin_coeff(int i) const { return sin_[static_cast<std::size_t>(i - 1)]; }

  C eval(double t) const {
    C acc = cos_[0];
    for (int i = 1; i <= order(); ++i) {
      const double phase = i * omega_ * t;
      add_scaled(acc, std::cos(phase), cos_coeff(i));
      add_scaled(acc, std::sin(phase), sin_coeff(i));
    }
    return acc;
  }

  /// Term-wise derivative; the order never grows.
  TrigPoly derivative() const {
    const int k = order();
    std::vector<C> dc, ds;
    dc.reserve(k);
    ds.reserve(k);
    for (int i = 1; i <= k; ++i) {
      const double w = i * omega_;
      C c = zero_like(cos_[0]);
      add_scaled(c, w, sin_coeff(i));
      C s = zero_like(cos_[0]);
      add_scaled(s, -w, cos_coeff(i));
      dc.push_back(std::move(c));
      ds.push_back(std::move(s));
    }
    return TrigPoly(omega_, zero_like(cos_[0]), std::move(dc), std::move(ds));
  }

  /// Highest harmonic with a nonzero coefficient (0 for a constant).
  int trimmed_order() const {
    for (int i = order(); i >= 1; --i)
      if (block_max_abs(cos_coeff(i)) != 0.0 || block_max_abs(sin_coeff(i)) != 0.0) return i;
    return 0;
  }

  TrigPoly trimmed() const {
    const int k = trimmed_order();
    std::vector<C> c, s;
    for (int i = 1; i <= k; ++i) {
      c.push_back(cos_coeff(i));
      s.push_back(sin_coeff(i));
    }
    return TrigPoly(omega_, cos_[0], std::move(c), std::move(s));
  }

  bool is_zero() const { return trimmed_order() == 0 && block_max_abs(cos_[0]) == 0.0; }

  /// Largest coefficient-block norm (Euclidean for vectors, Frobenius for
  /// matrices).
  double max_coeff_norm() const {
    double m = block_norm(cos_[0]);
    for (int i = 1; i <= order(); ++i) {
      m = std::max(m, block_norm(cos_coeff(i)));
      m = std::max(m, block_norm(sin_coeff(i)));
    }
    return m;
  }

 private:
  void validate() const {
    if (!(omega_ > 0.0)) throw invalid_input("TrigPoly: base frequency must be positive");
    for (const C& c : cos_) {
      if (!same_shape(c, cos_[0])) throw invalid_input("TrigPoly: coefficient shape mismatch");
      if (!block_finite(c)) throw invalid_input("TrigPoly: non-finite coefficient");
    }
    for (const C& s : sin_) {
      if (!same_shape(s, cos_[0])) throw invalid_input("TrigPoly: coefficient shape mismatch");
      if (!block_finite(s)) throw invalid_input("TrigPoly: non-finite coefficient");
    }
  }

  double omega_;
  std::vector<C> cos_;  // cos_[0] is the constant term, cos_[i] pairs with cos(i omega t)
  std::vector<C> sin_;  // sin_[i-1] pairs with sin(i omega t)
};

using VecTrigPoly = TrigPoly<Vec>;
using MatTrigPoly = TrigPoly<Matrix>;

/// a*p + b*q, coefficient-wise; order of the result is max(p.order, q.order).
template <class C>
TrigPoly<C> linear_combo(double a, const TrigPoly<C>& p, double b, const TrigPoly<C>& q) {
  check_same_frequency(p.omega(), q.omega());
  if (!same_shape(p.constant_coeff(), q.constant_coeff()))
    throw invalid_input("linear_combo: coefficient shape mismatch");
  const int k = std::max(p.order(), q.order());
  auto combine = [&](const C* pc, const C* qc) {
    C r = zero_like(p.constant_coeff());
    if (pc) add_scaled(r, a, *pc);
    if (qc) add_scaled(r, b, *qc);
    return r;
  };
  C constant = combine(&p.constant_coeff(), &q.constant_coeff());
  std::vector<C> cs, ss;
  cs.reserve(k);
  ss.reserve(k);
  for (int i = 1; i <= k; ++i) {
    const C* pc = (i <= p.order()) ? &p.cos_coeff(i) : nullptr;
    const C* qc = (i <= q.order()) ? &q.cos_coeff(i) : nullptr;
    cs.push_back(combine(pc, qc));
    const C* ps = (i <= p.order()) ? &p.sin_coeff(i) : nullptr;
    const C* qs = (i <= q.order()) ? &q.sin_coeff(i) : nullptr;
    ss.push_back(combine(ps, qs));
  }
  return TrigPoly<C>(p.omega(), std::move(constant), std::move(cs), std::move(ss));
}

template <class C>
TrigPoly<C> operator+(const TrigPoly<C>& p, const TrigPoly<C>& q) {
  return linear_combo(1.0, p, 1.0, q);
}
template <class C>
TrigPoly<C> operator-(const TrigPoly<C>& p, const TrigPoly<C>& q) {
  return linear_combo(1.0, p, -1.0, q);
}
template <class C>
TrigPoly<C> operator*(double s, const TrigPoly<C>& p) {
  return linear_combo(s, p, 0.0, p);
}

namespace detail {

/// Exact product of two trigonometric polynomials via the product-to-sum
/// identities. Harmonics i and j combine into |i-j| and i+j; the constant
/// term rides along as harmonic zero with cos(0) = 1. Result order is
/// exactly the sum of the operand orders.
template <class CA, class CB, class Mul>
auto trig_product(const TrigPoly<CA>& A, const TrigPoly<CB>& B, Mul mul) {
  using CR = std::invoke_result_t<Mul, const CA&, const CB&>;
  check_same_frequency(A.omega(), B.omega());
  const int la = A.order(), lb = B.order();
  const int L = la + lb;
  const CR proto = zero_like(mul(A.constant_coeff(), B.constant_coeff()));
  std::vector<CR> rc(static_cast<std::size_t>(L) + 1, proto);
  std::vector<CR> rs(static_cast<std::size_t>(L), proto);
  auto add_cos = [&](int idx, double w, const CR& v) { add_scaled(rc[idx], w, v); };
  auto add_sin = [&](int idx, double w, const CR& v) {
    if (idx >= 1) add_scaled(rs[idx - 1], w, v);
  };

  for (int i = 0; i <= la; ++i) {
    for (int j = 0; j <= lb; ++j) {
      const int d = i - j;
      {
        // cos x cos -> cos|i-j| + cos(i+j), each at weight 1/2
        const CR p = mul(i == 0 ? A.constant_coeff() : A.cos_coeff(i),
                         j == 0 ? B.constant_coeff() : B.cos_coeff(j));
        add_cos(std::abs(d), 0.5, p);
        add_cos(i + j, 0.5, p);
      }
      if (j >= 1) {
        // cos x sin -> sin(i+j) - sin(i-j), weights 1/2
        const CR p = mul(i == 0 ? A.constant_coeff() : A.cos_coeff(i), B.sin_coeff(j));
        add_sin(i + j, 0.5, p);
        if (d > 0)
          add_sin(d, -0.5, p);
        else if (d < 0)
          add_sin(-d, 0.5, p);
      }
      if (i >= 1) {
        // sin x cos -> sin(i+j) + sin(i-j), weights 1/2
        const CR p = mul(A.sin_coeff(i), j == 0 ? B.constant_coeff() : B.cos_coeff(j));
        add_sin(i + j, 0.5, p);
        if (d > 0)
          add_sin(d, 0.5, p);
        else if (d < 0)
          add_sin(-d, -0.5, p);
      }
      if (i >= 1 && j >= 1) {
        // sin x sin -> cos|i-j| - cos(i+j), weights 1/2
        const CR p = mul(A.sin_coeff(i), B.sin_coeff(j));
        add_cos(std::abs(d), 0.5, p);
        add_cos(i + j, -0.5, p);
      }
    }
  }
  CR constant = std::move(rc[0]);
  rc.erase(rc.begin());
  return TrigPoly<CR>(A.omega(), std::move(constant), std::move(rc), std::move(rs));
}

}  // namespace detail

/// Pointwise matrix-times-vector product A(t) f(t), exact in coefficients.
inline VecTrigPoly product(const MatTrigPoly& A, const VecTrigPoly& f) {
  if (A.constant_coeff().cols() != f.constant_coeff().size())
    throw invalid_input("apply: matrix columns do not match vector dimension");
  return detail::trig_product(A, f, [](const Matrix& m, const Vec& v) { return m.apply(v); });
}

/// Pointwise matrix product A(t) B(t), exact in coefficients.
inline MatTrigPoly product(const MatTrigPoly& A, const MatTrigPoly& B) {
  if (A.constant_coeff().cols() != B.constant_coeff().rows())
    throw invalid_input("product: inner dimension mismatch");
  return detail::trig_product(A, B, [](const Matrix& a, const Matrix& b) { return a * b; });
}

/// Exact integral of f over [t0, t0+h]. The constant term contributes a0*h;
/// harmonic i contributes through its antiderivatives sin(i w t)/(i w) and
/// -cos(i w t)/(i w).
inline Vec integral_over_step(const VecTrigPoly& f, double t0, double h) {
  Vec r = zero_like(f.constant_coeff());
  add_scaled(r, h, f.constant_coeff());
  const double t1 = t0 + h;
  for (int i = 1; i <= f.order(); ++i) {
    const double w = i * f.omega();
    add_scaled(r, (std::sin(w * t1) - std::sin(w * t0)) / w, f.cos_coeff(i));
    add_scaled(r, (std::cos(w * t0) - std::cos(w * t1)) / w, f.sin_coeff(i));
  }
  return r;
}

/// Largest coefficient-wise difference between two polynomials.
template <class C>
double max_coeff_diff(const TrigPoly<C>& p, const TrigPoly<C>& q) {
  const TrigPoly<C> d = linear_combo(1.0, p, -1.0, q);
  double m = block_max_abs(d.constant_coeff());
  for (int i = 1; i <= d.order(); ++i) {
    m = std::max(m, block_max_abs(d.cos_coeff(i)));
    m = std::max(m, block_max_abs(d.sin_coeff(i)));
  }
  return m;
}

/// Largest Hamiltonian defect over the coefficient blocks of a matrix
/// polynomial. Zero (within tolerance) iff the polynomial takes values in
/// sp(2d) for all t, since the defect is linear in the coefficients.
inline double max_hamiltonian_defect(const MatTrigPoly& A, const SymplecticForm& j) {
  double m = hamiltonian_defect(A.constant_coeff(), j);
  for (int i = 1; i <= A.order(); ++i) {
    m = std::max(m, hamiltonian_defect(A.cos_coeff(i), j));
    m = std::max(m, hamiltonian_defect(A.sin_coeff(i), j));
  }
  return m;
}

}  // namespace liesplit
