#pragma once

#include <stdexcept>
#include <string>

namespace gradedroute {

// Invalid arguments are reported with std::invalid_argument. The types below
// name the domain failures that callers are expected to tell apart.

/// Two positions coincide, so no quadrant is defined.
class CoincidentPointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A link has no available bandwidth left.
class CongestedLinkError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A channel is loaded at or above its service capacity (unbounded delay).
class SaturatedChannelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A constrained problem has no feasible point.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An object was used before it was ready (e.g. an empty knowledge base).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gradedroute
