#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace roofkit {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  NotUnitTrace,
  NotPSD,
  NotNormalized,
  NotProbability,
  NotIsometry,
  RankMismatch,
  DimensionMismatch,
  NotTracePreserving,
  InvalidCorrelation,
  PreconditionFailed,
  IndexOutOfRange,
  NotMember,
  ParseError,
  BudgetZero,
  ObjectiveNaN,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code names the violated invariant;
/// residual carries the measured violation when one exists (NaN otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail,
        double residual = std::numeric_limits<double>::quiet_NaN());

  ErrorCode code() const noexcept { return code_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace roofkit
