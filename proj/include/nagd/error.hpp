#pragma once

#include <stdexcept>
#include <string>

namespace nagd {

enum class ErrorCode {
  InvalidArgument,
  EigensolverNoConvergence,
  DomainError,
  OverflowSaturation,
  SingularBasis,
  NoEquilibrium,
  NotApplicable,
  NonFiniteField,
  InsufficientPoints,
  NonPositive,
  TrivialNullspace,
  ConfigError,
  GridTooLarge,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nagd
