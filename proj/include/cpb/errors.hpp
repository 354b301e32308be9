#pragma once

#include <stdexcept>
#include <string>

namespace cpb {

/// Malformed input data: table entries out of range, mismatched rings, bad ids.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured size limit (order cap, enumeration cap) would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded check produced a counterexample to a statement that must hold.
/// Carries a human-readable description of the witness.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpb
