#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ffk {

enum class ErrorCode {
  // numerics
  AllColumnsNumericallyZero,
  NotSquare,
  NonFiniteEntries,
  NotPositiveDefinite,
  // construction
  NonPositiveWeight,
  ZeroSubspace,
  ZeroVector,
  DimensionMismatch,
  MemberCountMismatch,
  InvalidIndex,
  // analysis
  NotAFrame,
  NotAFusionFrame,
  NotUnitVector,
  WrongEtaCount,
  NotADual,
  EmptyRemainder,
  SingularOperator,
  NotUniformWeights,
  RatioBoundViolated,
  // systems
  VectorOutsideSubspace,
  LocalNotAFrame,
  LocalNotParseval,
  // io
  ParseError,
  SchemaVersionUnsupported,
  FieldMismatch,
  UnknownExample,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AllColumnsNumericallyZero: return "AllColumnsNumericallyZero";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFiniteEntries: return "NonFiniteEntries";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::ZeroSubspace: return "ZeroSubspace";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MemberCountMismatch: return "MemberCountMismatch";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotAFusionFrame: return "NotAFusionFrame";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::WrongEtaCount: return "WrongEtaCount";
    case ErrorCode::NotADual: return "NotADual";
    case ErrorCode::EmptyRemainder: return "EmptyRemainder";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::NotUniformWeights: return "NotUniformWeights";
    case ErrorCode::RatioBoundViolated: return "RatioBoundViolated";
    case ErrorCode::VectorOutsideSubspace: return "VectorOutsideSubspace";
    case ErrorCode::LocalNotAFrame: return "LocalNotAFrame";
    case ErrorCode::LocalNotParseval: return "LocalNotParseval";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception type.
/// `member` carries the offending member (subspace or local frame) index when
/// one is known, `where` a document path such as `subspaces[2].vectors[0]`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> member = std::nullopt, std::string where = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message),
        member_(member),
        where_(std::move(where)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> member() const noexcept { return member_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> member_;
  std::string where_;
};

}  // namespace ffk
