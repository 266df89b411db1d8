#pragma once

#include <stdexcept>
#include <string>

namespace lyapqc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Control field exceeds the strength bound |f| <= S.
class BoundViolation : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Operation called in the wrong control regime (e.g. an SSC step on an FSC state).
class RegimeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested design or plan does not exist for these inputs.
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Single-shot steering requested on a state that is not phase aligned.
class AlignmentError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid scenario or simulation configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lyapqc
