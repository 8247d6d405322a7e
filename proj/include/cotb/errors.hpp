#pragma once

#include <stdexcept>
#include <string>

namespace cotb {

// Raised when a computation leaves its numeric domain: degenerate or
// indefinite metric blocks, nonpositive scaling values, ill-conditioned
// bundle metrics, or non-finite field evaluations.
class numerical_domain_error : public std::runtime_error {
 public:
  explicit numerical_domain_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised for bad caller input: unknown catalog names, invalid sample
// counts, malformed scheme parameters.
class usage_error : public std::runtime_error {
 public:
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cotb
