#include "roofkit/errors.hpp"

#include <cmath>
#include <sstream>

namespace roofkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotProbability: return "NotProbability";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BudgetZero: return "BudgetZero";
    case ErrorCode::ObjectiveNaN: return "ObjectiveNaN";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail, double residual) {
  std::ostringstream out;
  out << to_string(code) << ": " << detail;
  if (!std::isnan(residual)) out << " (residual " << residual << ")";
  return out.str();
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail, double residual)
    : std::runtime_error(format_message(code, detail, residual)),
      code_(code),
      residual_(residual) {}

}  // namespace roofkit
