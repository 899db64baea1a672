#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sectorium {

enum class ErrorKind {
  NonAssociative,
  NotLatinSquare,
  NoIdentity,
  NotAnIrrep,
  OrthogonalityViolation,
  IncompleteSet,
  NonUnitary,
  NonIntegralMultiplicity,
  GroupMismatch,
  NotEquivariant,
  NonUnitVector,
  NotInvariant,
  NotALoop,
  UnknownEdge,
  NotInCMu,
  OddHalfInteger,
  IntegerLambda,
  ZeroVector,
  UnknownSubcommand,
  MalformedInput,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::NotLatinSquare: return "NotLatinSquare";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::NotAnIrrep: return "NotAnIrrep";
    case ErrorKind::OrthogonalityViolation: return "OrthogonalityViolation";
    case ErrorKind::IncompleteSet: return "IncompleteSet";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NonIntegralMultiplicity: return "NonIntegralMultiplicity";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotALoop: return "NotALoop";
    case ErrorKind::UnknownEdge: return "UnknownEdge";
    case ErrorKind::NotInCMu: return "NotInCMu";
    case ErrorKind::OddHalfInteger: return "OddHalfInteger";
    case ErrorKind::IntegerLambda: return "IntegerLambda";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::UnknownSubcommand: return "UnknownSubcommand";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-readable kind; the
// message names the offending indices or residual.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sectorium
