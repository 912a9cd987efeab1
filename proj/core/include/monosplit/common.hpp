#pragma once

#include <stdexcept>
#include <string>

namespace monosplit {

// Dimension / operator-shape mismatches.
struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Out-of-range numeric parameters (nonpositive stepsize, inverted box, ...).
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Structural misuse: unknown names, missing constants, wrong solver for the
// instance shape.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct sampling_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A problem factory failed to certify its reference solution.
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A diagnostic was asked for data the run did not record.
struct diagnostic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace monosplit
