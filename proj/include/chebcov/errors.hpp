#pragma once

#include <stdexcept>

namespace chebcov {

// Bad argument values: wrong dimensions, non-finite entries, out-of-range flags.
class InvalidInput : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Eigensolver failed to reach the off-diagonal target within the sweep cap.
class NoConvergence : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conditioning block is singular (or not positive definite).
class SingularBlock : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model has no eigenvalue above the rank tolerance (point mass).
class DegenerateModel : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sampler specification is not a valid distribution.
class InvalidSpec : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace chebcov
