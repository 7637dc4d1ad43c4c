#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liesplit {

/// Base class for all liesplit errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejected input: wrong shape, dimension, domain or configuration.
struct invalid_input : error {
  using error::error;
};

/// Operands carry different base frequencies.
struct frequency_error : invalid_input {
  using invalid_input::invalid_input;
};

/// A linear solve met a pivot below the singularity tolerance.
struct singular_error : error {
  using error::error;
};

/// An iterative computation exceeded its iteration cap.
struct convergence_error : error {
  using error::error;
};

/// A time step could not be completed; carries the index of the failed step.
struct step_error : error {
  step_error(std::size_t index_, const std::string& what_) : error(what_), index(index_) {}
  std::size_t index;
};

}  // namespace liesplit
