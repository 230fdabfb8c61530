#pragma once

#include <stdexcept>
#include <string>

namespace qvol {

/// Numerical-domain failure: the requested quantity is undefined at the given input.
class DomainError : public std::runtime_error {
 public:
  enum class Kind {
    kSingularState,
    kNearBoundary,
    kNonFiniteIntegrand,
    kSurrogateDomainMismatch,
  };

  DomainError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// File-system or format failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qvol
