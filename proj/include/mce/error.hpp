#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mce {

enum class ErrorKind {
  ZeroInverse,
  Singular,
  DimensionMismatch,
  NotSquare,
  DuplicateAbscissa,
  RetryExhausted,
  ZeroScalar,
  ZeroTuple,
  HullNotOneDim,
  UnexpectedCoefficient,
  TooLarge,
  NotConjugate,
  OutOfRange,
  NoInvertibleElement,
  InvalidArgument,
  ParseError,
  ValidationError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroInverse: return "ZeroInverse";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorKind::RetryExhausted: return "RetryExhausted";
    case ErrorKind::ZeroScalar: return "ZeroScalar";
    case ErrorKind::ZeroTuple: return "ZeroTuple";
    case ErrorKind::HullNotOneDim: return "HullNotOneDim";
    case ErrorKind::UnexpectedCoefficient: return "UnexpectedCoefficient";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotConjugate: return "NotConjugate";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoInvertibleElement: return "NoInvertibleElement";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mce
