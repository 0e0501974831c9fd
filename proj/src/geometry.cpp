#include "tsdyn/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "tsdyn/errors.hpp"

namespace tsdyn {

double ccw_angle(Vec2 a, Vec2 b) {
  double t = std::atan2(cross(a, b), dot(a, b));
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  return t;
}

double origin_segment_distance(Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.norm2();
  if (len2 == 0.0) return a.norm();
  const double s = std::clamp(-dot(a, ab) / len2, 0.0, 1.0);
  return (a + ab * s).norm();
}

Mat2 Mat2::inverse() const {
  const double dt = det();
  if (dt == 0.0) throw Error(ErrorCode::kInvalidArgument, "singular 2x2 matrix");
  return {d / dt, -b / dt, -c / dt, a / dt};
}

double Mat2::norm() const {
  // sqrt of the largest eigenvalue of M^T M.
  const double p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
  const double tr = p + r;
  const double disc = std::sqrt(std::max(0.0, (p - r) * (p - r) + 4.0 * q * q));
  return std::sqrt(0.5 * (tr + disc));
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonMatchingEdge: return "NonMatchingEdge";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kNegativeAngleDefect: return "NegativeAngleDefect";
    case ErrorCode::kZeroArea: return "ZeroArea";
    case ErrorCode::kBasisMismatch: return "BasisMismatch";
    case ErrorCode::kDegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::kIrrationalAngle: return "IrrationalAngle";
    case ErrorCode::kNonSimplePolygon: return "NonSimplePolygon";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRankDeficiency: return "RankDeficiency";
    case ErrorCode::kHorizonTooShort: return "HorizonTooShort";
    case ErrorCode::kFrameDegenerate: return "FrameDegenerate";
    case ErrorCode::kClusterOverlap: return "ClusterOverlap";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kBoundExceeded: return "BoundExceeded";
    case ErrorCode::kDegenerateFamily: return "DegenerateFamily";
    case ErrorCode::kNotRecurrent: return "NotRecurrent";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace tsdyn
