#pragma once

#include <stdexcept>
#include <string>

namespace qlb {

/// Misuse of an operation contract (mismatched orders, bad permutation, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mathematically invalid user input (non-antisymmetric f, bad counit, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInvertible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested associator degree needs coefficients we do not ship.
class UnsupportedDegree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncation was too small for the requested computation.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition with an attached mathematical defect (e.g. Phi != 1 mod h^2).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qlb
