#pragma once

#include <stdexcept>
#include <string>

namespace qdc {

// Caller-supplied configuration is malformed (bad sizes, unknown names, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Register layouts do not match what an operation requires.
class LayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A simulation precondition failed on the supplied state.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Support of a state leaks outside the subspace an operation is defined on.
class SubspaceViolation : public PreconditionError {
 public:
  SubspaceViolation(const std::string& what, double leaked_weight)
      : PreconditionError(what + " (leaked weight " + std::to_string(leaked_weight) + ")"),
        leaked_weight_(leaked_weight) {}
  double leaked_weight() const noexcept { return leaked_weight_; }

 private:
  double leaked_weight_;
};

class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdc
