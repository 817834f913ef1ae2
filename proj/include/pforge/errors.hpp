#pragma once

#include <stdexcept>
#include <string>

namespace pforge {

// Mismatched group specs, malformed patterns, bad JSON shapes.
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration request larger than the configured limit.
class SizeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

// subgroup_closure grew past its cap (infinite or too-large subgroup).
class ClosureOverflow : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

// An operation was called outside its documented domain.
class PreconditionError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

} // namespace pforge
