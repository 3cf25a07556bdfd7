#pragma once

#include <stdexcept>
#include <string>

namespace phimix {

// Raised when a complex evaluation would cross a branch cut or hit a pole,
// or when a transform has no analytic continuation to the requested point.
class NumericDomainError : public std::domain_error {
 public:
  explicit NumericDomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised by closed-form routines asked about a law that has no closed form.
class NoClosedFormError : public std::logic_error {
 public:
  explicit NoClosedFormError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace phimix
