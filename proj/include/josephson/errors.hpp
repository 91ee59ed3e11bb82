#pragma once

#include <stdexcept>
#include <string>

namespace josephson {

/// Invalid input: bad numerics, unknown names, shape mismatches.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request would exceed a configured resource cap (Hilbert dimension, memory).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver could not reach its tolerance. Carries no payload; callers that
/// want the best iterate use the result-returning solver entry points.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace josephson
