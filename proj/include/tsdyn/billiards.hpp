// Unfolding of rational polygonal billiard tables into translation surfaces.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsdyn/surface.hpp"

namespace tsdyn {

struct Rational {
  int64_t p = 0;
  int64_t q = 1;
};

/// Parses "p/q"; throws IrrationalAngle for anything that is not a ratio of
/// positive integers.
Rational parse_rational(const std::string& s);

struct RationalPolygon {
  Polygon vertices;
  /// Interior angle at vertex i, in units of pi, in lowest terms.
  std::vector<Rational> angles;
};

/// Builds the polygon from its angles. lengths may be empty for a triangle
/// (law of sines, first side of length 1); otherwise one length per side.
RationalPolygon rational_polygon(const std::vector<Rational>& angles, const std::vector<double>& lengths = {});

/// Recovers angles from the vertices; throws IrrationalAngle if some angle
/// is not within 1e-9 of p/q with q <= max_denominator.
RationalPolygon rational_polygon_from_vertices(const Polygon& vertices, int64_t max_denominator = 1000);

struct DihedralElement {
  int64_t rotation = 0;  // rotation by 2 pi rotation / N
  int reflection = 0;    // 0 or 1
};

struct UnfoldingResult {
  TranslationSurface surface;
  int64_t group_order = 0;  // 2N
  std::vector<DihedralElement> copy_map;
  /// Cone angles over 2 pi predicted from the angles alone, sorted.
  std::vector<int> predicted_cone_multiples;
  int predicted_genus = 0;
};

UnfoldingResult unfold(const RationalPolygon& polygon);

}  // namespace tsdyn
