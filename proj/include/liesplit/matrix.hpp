#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "liesplit/errors.hpp"

namespace liesplit {

using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void check_same_size(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) throw invalid_input(std::string(what) + ": vector size mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  check_same_size(a, b, "vec_add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  check_same_size(a, b, "vec_sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec vec_scaled(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

/// Dense real matrix, row-major, sized at run time. Values are immutable in
/// practice: operations return fresh matrices.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw invalid_input("Matrix: dimensions must be at least 1x1");
  }

  Matrix(std::size_t rows, std::size_t cols, Vec entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw invalid_input("Matrix: dimensions must be at least 1x1");
    if (data_.size() != rows * cols) throw invalid_input("Matrix: entry count does not match shape");
    if (!all_finite(data_)) throw invalid_input("Matrix: non-finite entry");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> init)
      : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) throw invalid_input("Matrix: dimensions must be at least 1x1");
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw invalid_input("Matrix: ragged initializer");
      for (double x : row) {
        if (!std::isfinite(x)) throw invalid_input("Matrix: non-finite entry");
        data_.push_back(x);
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const Vec& entries() const { return data_; }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  Matrix operator+(const Matrix& o) const {
    Matrix r = *this;
    r += o;
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix r = *this;
    r -= o;
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (double& x : r.data_) x = -x;
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Vec apply(const Vec& x) const {
    if (x.size() != cols_) throw invalid_input("Matrix::apply: dimension mismatch");
    Vec y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Maximum absolute column sum.
  double one_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  void check_same_shape(const Matrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw invalid_input(std::string(what) + ": shape mismatch");
  }

 private:
  std::size_t rows_, cols_;
  Vec data_;
};

inline Matrix operator*(double s, const Matrix& m) {
  Matrix r = m;
  r *= s;
  return r;
}
inline Matrix operator*(const Matrix& m, double s) { return s * m; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw invalid_input("matrix product: inner dimension mismatch");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  a.check_same_shape(b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// AB - BA for square matrices of equal size.
inline Matrix commutator(const Matrix& a, const Matrix& b) {
  if (!a.is_square() || !b.is_square()) throw invalid_input("commutator: operands must be square");
  a.check_same_shape(b, "commutator");
  return a * b - b * a;
}

inline std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " ") << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]" << (i + 1 == m.rows() ? "]" : "\n");
  }
  return os;
}

/// Canonical symplectic form on R^(2d): J = [[0, I], [-I, 0]].
/// J is antisymmetric and J^2 = -I.
class SymplecticForm {
 public:
  explicit SymplecticForm(std::size_t dimension) : j_(dimension, dimension) {
    if (dimension == 0 || dimension % 2 != 0)
      throw invalid_input("SymplecticForm: dimension must be a positive even number");
    const std::size_t d = dimension / 2;
    for (std::size_t i = 0; i < d; ++i) {
      j_(i, d + i) = 1.0;
      j_(d + i, i) = -1.0;
    }
  }

  std::size_t dimension() const { return j_.rows(); }
  const Matrix& matrix() const { return j_; }

 private:
  Matrix j_;
};

/// Frobenius norm of M^T J M - J; zero iff M is symplectic.
inline double symplectic_defect(const Matrix& m, const SymplecticForm& j) {
  if (!m.is_square() || m.rows() != j.dimension())
    throw invalid_input("symplectic_defect: matrix does not match form dimension");
  const Matrix& J = j.matrix();
  return (m.transpose() * J * m - J).frobenius_norm();
}

/// Frobenius norm of A^T J + J A; zero iff A is Hamiltonian (in sp(2d)).
inline double hamiltonian_defect(const Matrix& a, const SymplecticForm& j) {
  if (!a.is_square() || a.rows() != j.dimension())
    throw invalid_input("hamiltonian_defect: matrix does not match form dimension");
  const Matrix& J = j.matrix();
  return (a.transpose() * J + J * a).frobenius_norm();
}

}  // namespace liesplit
