#pragma once

#include <stdexcept>
#include <string>

namespace batchrips {

// Malformed or unusable user input (files, flags, degenerate clouds).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (dead vertex, missing face, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An oracle was asked to enumerate something beyond its configured size cap.
class OracleScaleError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace batchrips
