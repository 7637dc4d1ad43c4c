#pragma once

// Umbrella header: geometric integration of periodic affine systems
// xdot = A(t) x + f(t) through the Lie algebra of their extended vector
// fields, with splitting and Runge-Kutta steppers and the unbalanced-rotor
// benchmark.

#include "liesplit/errors.hpp"
#include "liesplit/matrix.hpp"
#include "liesplit/linalg.hpp"
#include "liesplit/trigpoly.hpp"
#include "liesplit/lie_algebra.hpp"
#include "liesplit/integrators.hpp"
#include "liesplit/rotor.hpp"
#include "liesplit/random.hpp"
#include "liesplit/io.hpp"
