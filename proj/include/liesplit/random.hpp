#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "liesplit/lie_algebra.hpp"

namespace liesplit {

/// Deterministic random source: the doubles are derived from mt19937_64
/// output directly, so streams are reproducible across platforms and
/// standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::mt19937_64 gen_;
};

inline Vec random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = scale * rng.symmetric();
  return v;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * rng.symmetric();
  return m;
}

inline Matrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = scale * rng.symmetric();
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

/// J S with S symmetric: the generic element of sp(2d).
inline Matrix random_hamiltonian(Rng& rng, const SymplecticForm& j, double scale = 1.0) {
  return j.matrix() * random_symmetric(rng, j.dimension(), scale);
}

inline Matrix random_algebra_matrix(Rng& rng, MatrixAlgebra g, std::size_t n, double scale = 1.0) {
  switch (g) {
    case MatrixAlgebra::general_linear: return random_matrix(rng, n, n, scale);
    case MatrixAlgebra::symplectic: return random_hamiltonian(rng, SymplecticForm(n), scale);
    case MatrixAlgebra::zero: return Matrix(n, n);
  }
  return Matrix(n, n);
}

inline VecTrigPoly random_vec_poly(Rng& rng, double omega, std::size_t n, int order,
                                   double scale = 1.0) {
  std::vector<Vec> cs, ss;
  for (int i = 0; i < order; ++i) {
    cs.push_back(random_vec(rng, n, scale));
    ss.push_back(random_vec(rng, n, scale));
  }
  return VecTrigPoly(omega, random_vec(rng, n, scale), std::move(cs), std::move(ss));
}

inline MatTrigPoly random_mat_poly(Rng& rng, double omega, std::size_t n, int order,
                                   double scale = 1.0,
                                   MatrixAlgebra g = MatrixAlgebra::general_linear) {
  std::vector<Matrix> cs, ss;
  for (int i = 0; i < order; ++i) {
    cs.push_back(random_algebra_matrix(rng, g, n, scale));
    ss.push_back(random_algebra_matrix(rng, g, n, scale));
  }
  return MatTrigPoly(omega, random_algebra_matrix(rng, g, n, scale), std::move(cs),
                     std::move(ss));
}

/// A random element of the sub-algebra identified by the spec (which must
/// have a finite matrix order bound).
inline LieElement random_element(Rng& rng, const AlgebraSpec& spec, double scale = 1.0) {
  if (!spec.mat_order)
    throw invalid_input("random_element: matrix order bound must be finite");
  MatTrigPoly A = random_mat_poly(rng, spec.omega, spec.n, *spec.mat_order, scale, spec.algebra);
  VecTrigPoly f = random_vec_poly(rng, spec.omega, spec.n, spec.vec_order, scale);
  return LieElement(std::move(A), std::move(f), scale * rng.symmetric());
}

}  // namespace liesplit
