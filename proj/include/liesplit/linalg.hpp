#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "liesplit/matrix.hpp"

namespace liesplit {

/// Solve a X = b by Gaussian elimination with partial pivoting. A pivot whose
/// magnitude falls below 1e-13 times the largest column norm of a is treated
/// as singular; implicit steppers rely on this to fail fast instead of
/// producing garbage at oversized steps.
inline Matrix lin_solve(const Matrix& a, const Matrix& b) {
  if (!a.is_square()) throw invalid_input("lin_solve: coefficient matrix must be square");
  if (b.rows() != a.rows()) throw invalid_input("lin_solve: right-hand side row mismatch");
  const std::size_t n = a.rows(), m = b.cols();

  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
    scale = std::max(scale, std::sqrt(s));
  }
  const double tol = 1e-13 * scale;
  if (scale == 0.0) throw singular_error("lin_solve: zero matrix");

  Matrix A = a;
  Matrix X = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < tol) throw singular_error("lin_solve: pivot below singularity tolerance");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(X(k, j), X(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      A(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      for (std::size_t j = 0; j < m; ++j) X(i, j) -= f * X(k, j);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = X(k, j);
      for (std::size_t i = k + 1; i < n; ++i) s -= A(k, i) * X(i, j);
      X(k, j) = s / A(k, k);
    }
  }
  return X;
}

inline Vec lin_solve(const Matrix& a, const Vec& b) {
  Matrix rhs(b.size(), 1, b);
  Matrix x = lin_solve(a, rhs);
  Vec r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = x(i, 0);
  return r;
}

/// Matrix exponential by scaling and squaring with a diagonal (6,6) Pade
/// approximant. The argument is scaled until its 1-norm is at most 1/4, which
/// keeps the truncation error far below 1e-12 at the sizes used here.
inline Matrix expm(const Matrix& a) {
  if (!a.is_square()) throw invalid_input("expm: matrix must be square");
  const std::size_t n = a.rows();
  const Matrix I = Matrix::identity(n);

  const double nrm = a.one_norm();
  int squarings = 0;
  if (nrm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));

  Matrix As = a * std::ldexp(1.0, -squarings);

  // c_k = c_{k-1} * (m - k + 1) / (k * (2m - k + 1)), m = 6
  double c[7];
  c[0] = 1.0;
  for (int k = 1; k <= 6; ++k) c[k] = c[k - 1] * (7.0 - k) / (k * (13.0 - k));

  const Matrix A2 = As * As;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  const Matrix U = As * (c[1] * I + c[3] * A2 + c[5] * A4);
  const Matrix V = c[0] * I + c[2] * A2 + c[4] * A4 + c[6] * A6;

  Matrix F = lin_solve(V - U, V + U);
  for (int i = 0; i < squarings; ++i) F = F * F;
  return F;
}

namespace detail {

/// Householder reduction to upper Hessenberg form (in place, similarity).
inline void hessenberg_reduce(Matrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) sigma += h(i, k) * h(i, k);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) continue;
    const double x0 = h(k + 1, k);
    const double alpha = (x0 >= 0.0) ? -sigma : sigma;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 <= std::numeric_limits<double>::min()) continue;
    const double beta = 2.0 / vnorm2;
    // rows k+1..n-1
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    // columns k+1..n-1
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

/// Moduli of the eigenvalues of a converged trailing 1x1 or 2x2 block.
inline void push_block_moduli(const Matrix& h, std::size_t p, std::size_t q,
                              std::vector<double>& out) {
  if (p == q) {
    out.push_back(std::abs(h(p, p)));
    return;
  }
  const double a = h(p, p), b = h(p, q), c = h(q, p), d = h(q, q);
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double r1 = 0.5 * tr + (tr >= 0.0 ? sq : -sq);
    const double r2 = (r1 != 0.0) ? det / r1 : 0.5 * tr - (tr >= 0.0 ? sq : -sq);
    out.push_back(std::abs(r1));
    out.push_back(std::abs(r2));
  } else {
    const double m = std::sqrt(det);  // complex pair: |lambda|^2 = det > 0
    out.push_back(m);
    out.push_back(m);
  }
}

/// Apply a 3 (or 2) element Householder reflector to rows r0..r0+len-1.
inline void apply_reflector_rows(Matrix& h, const double* v, double beta, std::size_t r0,
                                 std::size_t len, std::size_t col_lo, std::size_t col_hi) {
  for (std::size_t j = col_lo; j <= col_hi; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += v[i] * h(r0 + i, j);
    s *= beta;
    for (std::size_t i = 0; i < len; ++i) h(r0 + i, j) -= s * v[i];
  }
}

inline void apply_reflector_cols(Matrix& h, const double* v, double beta, std::size_t c0,
                                 std::size_t len, std::size_t row_lo, std::size_t row_hi) {
  for (std::size_t i = row_lo; i <= row_hi; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < len; ++j) s += h(i, c0 + j) * v[j];
    s *= beta;
    for (std::size_t j = 0; j < len; ++j) h(i, c0 + j) -= s * v[j];
  }
}

inline bool make_reflector(double* v, std::size_t len, double& beta) {
  double sigma = 0.0;
  for (std::size_t i = 0; i < len; ++i) sigma += v[i] * v[i];
  sigma = std::sqrt(sigma);
  if (sigma == 0.0) return false;
  const double alpha = (v[0] >= 0.0) ? -sigma : sigma;
  v[0] -= alpha;
  double vnorm2 = 0.0;
  for (std::size_t i = 0; i < len; ++i) vnorm2 += v[i] * v[i];
  if (vnorm2 <= std::numeric_limits<double>::min()) return false;
  beta = 2.0 / vnorm2;
  return true;
}

/// Francis implicit double-shift sweep on the active block p..q of an upper
/// Hessenberg matrix; s and t are the trace and determinant of the shift
/// polynomial.
inline void francis_sweep(Matrix& h, std::size_t p, std::size_t q, double s, double t) {
  const std::size_t n = h.rows();
  double x = h(p, p) * h(p, p) + h(p, p + 1) * h(p + 1, p) - s * h(p, p) + t;
  double y = h(p + 1, p) * (h(p, p) + h(p + 1, p + 1) - s);
  double z = h(p + 1, p) * h(p + 2, p + 1);
  for (std::size_t k = p; k + 2 <= q; ++k) {
    double v[3] = {x, y, z};
    const std::size_t len = (k + 2 < q) ? 3 : std::min<std::size_t>(3, q - k + 1);
    double beta = 0.0;
    if (make_reflector(v, len, beta)) {
      apply_reflector_rows(h, v, beta, k, len, (k > p) ? k - 1 : p, n - 1);
      apply_reflector_cols(h, v, beta, k, len, 0, std::min(q, k + 3));
    }
    if (k + 2 <= q) {
      x = h(k + 1, k);
      y = h(k + 2, k);
      z = (k + 3 <= q) ? h(k + 3, k) : 0.0;
    }
  }
  // final 2-element reflector on rows q-1, q
  double v2[2] = {x, y};
  double beta = 0.0;
  if (make_reflector(v2, 2, beta)) {
    apply_reflector_rows(h, v2, beta, q - 1, 2, q - 2, n - 1);
    apply_reflector_cols(h, v2, beta, q - 1, 2, 0, q);
  }
}

/// All eigenvalue moduli of a real square matrix via Hessenberg reduction and
/// the shifted QR iteration with 1x1/2x2 deflation.
inline std::vector<double> eigen_moduli(Matrix h) {
  const std::size_t n = h.rows();
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(std::abs(h(0, 0)));
    return out;
  }
  hessenberg_reduce(h);
  const double eps = std::numeric_limits<double>::epsilon();

  std::size_t hi = n - 1;
  int iters = 0;
  while (true) {
    // deflate negligible subdiagonals
    for (std::size_t i = 1; i <= hi; ++i) {
      const double small = eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (std::abs(h(i, i - 1)) <= small) h(i, i - 1) = 0.0;
    }
    // p..hi is the trailing irreducible block
    std::size_t p = hi;
    while (p > 0 && h(p, p - 1) != 0.0) --p;

    if (p == hi || p + 1 == hi) {
      push_block_moduli(h, p, hi, out);
      if (p == 0) break;
      hi = p - 1;
      iters = 0;
      continue;
    }

    if (++iters > 60) throw convergence_error("eigen_moduli: QR iteration did not converge");
    double s, t;
    if (iters == 20 || iters == 40) {
      // exceptional shift to break symmetric cycles
      const double r = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
      s = 1.5 * r;
      t = r * r;
    } else {
      s = h(hi - 1, hi - 1) + h(hi, hi);
      t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    }
    francis_sweep(h, p, hi, s, t);
  }
  return out;
}

}  // namespace detail

/// Largest eigenvalue modulus of a square matrix.
inline double spectral_radius(const Matrix& m) {
  if (!m.is_square()) throw invalid_input("spectral_radius: matrix must be square");
  const std::vector<double> mods = detail::eigen_moduli(m);
  double r = 0.0;
  for (double x : mods) r = std::max(r, x);
  return r;
}

}  // namespace liesplit
