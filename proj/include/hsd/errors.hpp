#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsd {

enum class ErrorKind {
  InvalidArgument,
  NotPrime,
  ReducibleModulus,
  UnsupportedDegree,
  ContextMismatch,
  DivisionByZero,
  NonNilpotentImage,
  UnknownVariable,
  NotAUnit,
  FractionalExponent,
  TruncationOrder,
  LawAxiomViolation,
  RequiresCommutative,
  IndexRange,
  NotInvertible,
  ReconstructionMismatch,
  NoSolution,
  HypothesisFailure,
  CorrectionUnsolvable,
  FactorUnsupported,
  AssemblyMismatch,
  TooManyElements,
  ParseError,
  ResourceLimit,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hsd
