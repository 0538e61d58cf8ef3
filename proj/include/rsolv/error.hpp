#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rsolv {

// Every failure raised by the library carries a stable machine-readable kind
// (used verbatim in CLI error objects) plus a human-readable detail string.
enum class ErrorKind {
  ClosureCapExceeded,
  NotAPermutation,
  ElementOutOfRange,
  NotNormal,
  NotAHomomorphism,
  NotInjective,
  IncompatibleAmalgam,
  DisagreeOnAmalgam,
  NotCentral,
  IdentityElement,
  NotSolvable,
  NotProperSubgroup,
  OrderMismatch,
  NotIsomorphism,
  NotTorsionFree,
  EmbeddingTypeMismatch,
  IdentityWord,
  TooManyGenerators,
  BudgetExceeded,
  InvalidArgument,
  Overflow,
  ParseError,
  ResolutionError,
};

inline char const* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::ClosureCapExceeded: return "ClosureCapExceeded";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::IncompatibleAmalgam: return "IncompatibleAmalgam";
    case ErrorKind::DisagreeOnAmalgam: return "DisagreeOnAmalgam";
    case ErrorKind::NotCentral: return "NotCentral";
    case ErrorKind::IdentityElement: return "IdentityElement";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::NotProperSubgroup: return "NotProperSubgroup";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::NotIsomorphism: return "NotIsomorphism";
    case ErrorKind::NotTorsionFree: return "NotTorsionFree";
    case ErrorKind::EmbeddingTypeMismatch: return "EmbeddingTypeMismatch";
    case ErrorKind::IdentityWord: return "IdentityWord";
    case ErrorKind::TooManyGenerators: return "TooManyGenerators";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ResolutionError: return "ResolutionError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string const& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string detail) {
  throw Error(kind, std::move(detail));
}

}  // namespace rsolv
