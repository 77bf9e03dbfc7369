#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvol {

enum class ErrorCode {
  kUnboundedRegion,
  kEmptyRegion,
  kDegeneratePolytope,
  kNotFullDimensional,
  kNotInReebCone,
  kNotQGorenstein,
  kInvalidIndex,
  kAngleOutOfRange,
  kOracleDisagreement,
  kBudgetExceeded,
  kNonFiniteObjective,
  kDomainError,
  kPreconditionViolated,
  kNonIntegerDimension,
  kIntegralDivergence,
  kBoundViolated,
  kSchemaError,
  kModelError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnboundedRegion: return "UnboundedRegion";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kDegeneratePolytope: return "DegeneratePolytope";
    case ErrorCode::kNotFullDimensional: return "NotFullDimensional";
    case ErrorCode::kNotInReebCone: return "NotInReebCone";
    case ErrorCode::kNotQGorenstein: return "NotQGorenstein";
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kAngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::kOracleDisagreement: return "OracleDisagreement";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kNonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kNonIntegerDimension: return "NonIntegerDimension";
    case ErrorCode::kIntegralDivergence: return "IntegralDivergence";
    case ErrorCode::kBoundViolated: return "BoundViolated";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kModelError: return "ModelError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hvol
