#include "nagd/error.hpp"

namespace nagd {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EigensolverNoConvergence: return "EigensolverNoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OverflowSaturation: return "OverflowSaturation";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::NoEquilibrium: return "NoEquilibrium";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::TrivialNullspace: return "TrivialNullspace";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace nagd
