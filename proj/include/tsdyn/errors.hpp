// Error type shared by every tsdyn module.
#pragma once

#include <stdexcept>
#include <string>

namespace tsdyn {

enum class ErrorCode {
  kInvalidArgument = 1,
  kNonMatchingEdge,
  kDisconnected,
  kNegativeAngleDefect,
  kZeroArea,
  kBasisMismatch,
  kDegeneratePolygon,
  kIrrationalAngle,
  kNonSimplePolygon,
  kDegenerateTriangle,
  kDimensionMismatch,
  kRankDeficiency,
  kHorizonTooShort,
  kFrameDegenerate,
  kClusterOverlap,
  kBudgetExceeded,
  kBoundExceeded,
  kDegenerateFamily,
  kNotRecurrent,
  kConfigInvalid,
  kOverflow,
  kIo,
  kInternal,
};

/// Stable name of an error code, e.g. "NonMatchingEdge".
const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsdyn
