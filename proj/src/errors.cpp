#include "hsd/errors.hpp"

namespace hsd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NonNilpotentImage: return "NonNilpotentImage";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::FractionalExponent: return "FractionalExponent";
    case ErrorKind::TruncationOrder: return "TruncationOrder";
    case ErrorKind::LawAxiomViolation: return "LawAxiomViolation";
    case ErrorKind::RequiresCommutative: return "RequiresCommutative";
    case ErrorKind::IndexRange: return "IndexRange";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ReconstructionMismatch: return "ReconstructionMismatch";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::HypothesisFailure: return "HypothesisFailure";
    case ErrorKind::CorrectionUnsolvable: return "CorrectionUnsolvable";
    case ErrorKind::FactorUnsupported: return "FactorUnsupported";
    case ErrorKind::AssemblyMismatch: return "AssemblyMismatch";
    case ErrorKind::TooManyElements: return "TooManyElements";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace hsd
