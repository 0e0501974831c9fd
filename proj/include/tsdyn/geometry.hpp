// Plane vectors and 2x2 matrices, including the one-parameter subgroups of
// SL(2,R) used throughout (geodesic g_t, horocycle u_t, rotation r_theta).
#pragma once

#include <cmath>

namespace tsdyn {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double norm2() const { return x * x + y * y; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Angle in [0, pi] between two nonzero vectors.
inline double angle_between(Vec2 a, Vec2 b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

/// Counterclockwise angle in [0, 2 pi) from a to b.
double ccw_angle(Vec2 a, Vec2 b);

/// Distance from the origin to the closed segment [a, b].
double origin_segment_distance(Vec2 a, Vec2 b);

/// Row-major 2x2 real matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mat2 identity() { return {}; }
  /// diag(e^t, e^-t)
  static Mat2 geodesic(double t) { return {std::exp(t), 0.0, 0.0, std::exp(-t)}; }
  /// [[1, t], [0, 1]]
  static Mat2 unipotent(double t) { return {1.0, t, 0.0, 1.0}; }
  static Mat2 rotation(double theta) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    return {cs, -sn, sn, cs};
  }

  double det() const { return a * d - b * c; }
  Mat2 inverse() const;
  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  /// Operator norm (largest singular value).
  double norm() const;
};

}  // namespace tsdyn
