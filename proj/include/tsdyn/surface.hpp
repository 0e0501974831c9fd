// Translation surfaces given by polygons glued along parallel sides, their
// invariants, period coordinates and deformations in the period chart.
#pragma once

#include <string>
#include <vector>

#include "tsdyn/geometry.hpp"
#include "tsdyn/homology.hpp"
#include "tsdyn/triangulation.hpp"

namespace tsdyn {

using Polygon = std::vector<Vec2>;

struct SideRef {
  int polygon = 0;
  int side = 0;
  bool operator==(const SideRef&) const = default;
};

struct Gluing {
  SideRef a;
  SideRef b;
};

struct ConePoint {
  int vertex = 0;
  /// Cone angle divided by 2 pi.
  int angle_multiple = 1;
  int order() const { return angle_multiple - 1; }
};

struct BuildOptions {
  /// Allowed mismatch of glued sides, relative to sqrt(area).
  double edge_tolerance = 1e-9;
  /// Allowed deviation of a cone angle from a multiple of 2 pi, in radians.
  double angle_tolerance = 1e-6;
};

class TranslationSurface {
 public:
  TranslationSurface() = default;

  static TranslationSurface build(std::vector<Polygon> polygons, std::vector<Gluing> gluings, std::string label = {},
                                  const BuildOptions& opts = {});
  /// Surface whose polygons are the faces of tri, glued in edge order.
  static TranslationSurface from_triangulation(const FlatTriangulation& tri, std::string label = {});

  const std::vector<Polygon>& polygons() const { return polygons_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const std::vector<ConePoint>& cone_points() const { return cone_points_; }
  const FlatTriangulation& triangulation() const { return tri_; }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }

  int genus() const { return genus_; }
  /// Orders of the zeros of omega; {0} for a torus without zeros.
  std::vector<int> stratum() const;
  /// "H(2)", "H(1,1)", "H(0)".
  std::string stratum_label() const;
  int num_marked_points() const;
  int euler_characteristic() const;
  int homology_rank() const { return 2 * genus_ + static_cast<int>(cone_points_.size()) - 1; }

  /// Sum of shoelace areas of the polygons.
  double area() const;
  /// Half-edge of the triangulation carried by a polygon side.
  int side_half_edge(int polygon, int side) const { return side_half_edge_[polygon][side]; }

  /// Same surface with every vertex moved by g; gluings and triangulation kept.
  TranslationSurface transformed(const Mat2& g) const;
  TranslationSurface scaled(double s) const;

 private:
  friend TranslationSurface deform_by_periods(const TranslationSurface&, const HomologyBasis&,
                                              const std::vector<Vec2>&, double);
  void compute_invariants(const BuildOptions& opts);

  std::vector<Polygon> polygons_;
  std::vector<Gluing> gluings_;
  std::vector<std::vector<int>> side_half_edge_;
  FlatTriangulation tri_;
  std::vector<ConePoint> cone_points_;
  int genus_ = 0;
  std::string label_;
};

double area(const TranslationSurface& s);
/// Area from the period vector through the intersection form.
double symplectic_area(const TranslationSurface& s, const HomologyBasis& basis);
TranslationSurface normalize_area(const TranslationSurface& s);
HomologyBasis homology_basis(const TranslationSurface& s);
/// Holonomy of omega along each basis cycle. Throws BasisMismatch.
std::vector<Vec2> period_map(const TranslationSurface& s, const HomologyBasis& basis);
/// Surface with periods shifted by eps * delta, same combinatorics.
TranslationSurface deform_by_periods(const TranslationSurface& s, const HomologyBasis& basis,
                                     const std::vector<Vec2>& delta, double eps);

/// Real and imaginary parts of a plane-valued class as separate vectors.
std::vector<double> real_part(const std::vector<Vec2>& v);
std::vector<double> imag_part(const std::vector<Vec2>& v);

double polygon_area(const Polygon& p);
bool polygon_is_simple(const Polygon& p);

}  // namespace tsdyn
