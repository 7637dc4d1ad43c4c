#pragma once

#include <string>

#include "liesplit/liesplit.hpp"

namespace test_support {

inline liesplit::rotor::RotorParams bench_params() { return liesplit::rotor::RotorParams{}; }

/// Random elements of the rotor's sub-algebra: constant sp(4) matrix part,
/// forcing order up to k.
inline liesplit::AlgebraSpec rotor_spec() {
  return liesplit::AlgebraSpec{liesplit::MatrixAlgebra::symplectic, 4, 1.02, 1, 0};
}

inline liesplit::LieElement random_general_element(liesplit::Rng& rng, std::size_t n, int k,
                                                  int l, double omega = 1.02,
                                                  double scale = 1.0) {
  using namespace liesplit;
  return LieElement(random_mat_poly(rng, omega, n, l, scale), random_vec_poly(rng, omega, n, k, scale),
                    scale * rng.symmetric());
}

}  // namespace test_support
