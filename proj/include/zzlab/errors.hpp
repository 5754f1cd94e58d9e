#pragma once

#include <stdexcept>
#include <string>

namespace zzlab {

/// A precondition on the arguments of an operation was violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Work requested exceeds a configured budget (enumeration size, place-table degree).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point stage failed (root finder did not converge, etc.).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact identity that must hold by construction did not. Indicates a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace zzlab
