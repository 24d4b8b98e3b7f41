#pragma once

#include <stdexcept>
#include <string>

namespace vislab {

// Bad arguments: out-of-range parameters, malformed files, inverted intervals.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured cap (node budget, line budget, table size) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The computation is well-posed but has no meaningful answer (zero Favard
// length, a single occupied box, no dimension root).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside a map's declared domain.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Point on the singular locus of a map (projective line at infinity).
class SingularInput : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace vislab
