#pragma once

#include <stdexcept>
#include <string>

namespace crossk {

// Selects between the OpenMP kernels and their serial reference paths.
// Both paths produce identical results; the serial one is what the tests
// treat as ground truth.
enum class Execution { serial, parallel };

// Caller violated a documented precondition (bad parameter, bad weights...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operator application left the finite index window. Never silently
// truncated.
class WindowOverflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed external input (sequence files, vector JSON).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crossk
