// Integral relative homology H_1(M, Sigma; Z) of a triangulated translation
// surface: a basis whose first 2g cycles are an absolute symplectic basis
// (a1, b1, a2, b2, ...) and whose remaining cycles join cone point 0 to the
// other cone points.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsdyn/geometry.hpp"
#include "tsdyn/integer_matrix.hpp"
#include "tsdyn/triangulation.hpp"

namespace tsdyn {

struct HomologyBasis {
  int genus = 0;
  int num_cone_points = 0;
  /// k = 2g + |Sigma| - 1 integer edge chains, each of length num_edges.
  std::vector<std::vector<int64_t>> relative_cycles;
  /// Row e is the class of edge e (half-edge 2e) in this basis.
  IntMatrix edge_coordinates;
  /// Intersection numbers on the first 2g cycles.
  IntMatrix intersection_matrix;
  std::string fingerprint;

  int rank() const { return static_cast<int>(relative_cycles.size()); }
  int absolute_rank() const { return 2 * genus; }
  /// Class of half-edge h as a coordinate vector.
  std::vector<int64_t> half_edge_class(int h) const;
};

HomologyBasis compute_homology_basis(const FlatTriangulation& tri);

/// Boundary of a chain as a per-vertex multiplicity vector.
std::vector<int64_t> chain_boundary(const FlatTriangulation& tri, const std::vector<int64_t>& chain);

/// Signed intersection count of two absolute cycles given as basis
/// coordinate vectors (only the first 2g entries are used).
int64_t intersection_number(const HomologyBasis& basis, const std::vector<int64_t>& a, const std::vector<int64_t>& b);

/// Integral of a wedge b over the surface for classes given by their values
/// on the basis cycles; depends only on the absolute parts.
double wedge(const HomologyBasis& basis, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace tsdyn
