// Half-edge triangulation of a translation surface with holonomy vectors on
// edges, Lawson flips and the Delaunay restoration loop.
//
// Edge e owns half-edges 2e (holonomy +vec[e]) and 2e+1 (holonomy -vec[e]).
// Faces list three half-edges in counterclockwise order. Vertex ids are a
// function of the face list alone (numbered by smallest outgoing half-edge).
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsdyn/geometry.hpp"

namespace tsdyn {

/// Plane vector in binary128. Edge holonomies are stored in this precision:
/// the geodesic flow amplifies round-off by up to e^{2t}.
struct Vec2q {
  __float128 x = 0;
  __float128 y = 0;
  Vec2q() = default;
  Vec2q(__float128 x_, __float128 y_) : x(x_), y(y_) {}
  explicit Vec2q(Vec2 v) : x(v.x), y(v.y) {}
  Vec2 to_double() const { return {static_cast<double>(x), static_cast<double>(y)}; }
  Vec2q operator+(const Vec2q& o) const { return {x + o.x, y + o.y}; }
  Vec2q operator-() const { return {-x, -y}; }
};

struct FlipRecord {
  int edge;  // edge that was flipped
  int a1;    // half-edges whose holonomy sum is the new vector of 2*edge
  int b2;
};

class FlatTriangulation {
 public:
  FlatTriangulation() = default;
  FlatTriangulation(std::vector<Vec2> edge_vectors, std::vector<std::array<int, 3>> faces);

  int num_edges() const { return static_cast<int>(vec_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_half_edges() const { return 2 * num_edges(); }
  int num_vertices() const { return num_vertices_; }

  static int twin(int h) { return h ^ 1; }
  static int edge_of(int h) { return h >> 1; }
  static int sign_of(int h) { return (h & 1) ? -1 : 1; }

  Vec2 vec(int h) const { return (h & 1) ? -vec_[h >> 1] : vec_[h >> 1]; }
  Vec2 edge_vector(int e) const { return vec_[e]; }
  const std::vector<Vec2>& edge_vectors() const { return vec_; }
  /// Holonomy of an integer edge chain, summed in binary128.
  Vec2 chain_holonomy(const std::vector<int64_t>& chain) const;
  int next(int h) const { return next_[h]; }
  int prev(int h) const { return next_[next_[h]]; }
  int face(int h) const { return face_of_[h]; }
  int origin(int h) const { return origin_[h]; }
  const std::array<int, 3>& face_half_edges(int f) const { return faces_[f]; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  /// Interior angle of the face of h at origin(h).
  double corner_angle(int h) const;
  /// Next outgoing half-edge counterclockwise around origin(h).
  int rotate_ccw(int h) const { return twin(prev(h)); }
  /// Total cone angle at vertex v.
  double cone_angle(int v) const;
  /// Outgoing half-edge used as the angular origin at v (the smallest one).
  int reference_half_edge(int v) const { return ref_[v]; }
  /// Vertex of every half-edge's origin, indexed by half-edge.
  const std::vector<int>& origins() const { return origin_; }
  /// Angle from the reference direction at origin(h) to the direction of h,
  /// measured counterclockwise around the cone point.
  double angle_offset(int h) const;

  double area() const;
  double shortest_edge() const;
  double longest_edge() const;

  void apply(const Mat2& m);
  void scale(double s);
  void set_edge_vectors(std::vector<Vec2> v);
  /// Sets edge vectors from binary128 values (sum of integer multiples of
  /// the given vectors, row e of coeffs times per).
  void set_edge_vectors_from_classes(const std::vector<std::vector<int64_t>>& coeffs, const std::vector<Vec2q>& per);
  const std::vector<Vec2q>& edge_vectors_hp() const { return hp_; }

  /// Sum of the two angles opposite edge e.
  double opposite_angle_sum(int e) const;
  bool needs_flip(int e, double hysteresis = 1e-10) const;
  FlipRecord flip(int e);
  /// Flips until every edge is Delaunay; calls on_flip after each flip.
  int make_delaunay(const std::function<void(const FlipRecord&)>& on_flip = {}, double hysteresis = 1e-10,
                    int max_flips = 1000000);
  bool is_delaunay(double hysteresis = 1e-10) const;

  /// Throws DegenerateTriangle if some face has nonpositive oriented area.
  void check_nondegenerate(double rel_tol = 1e-14) const;

  /// Combinatorial fingerprint (faces and half-edge orientation), used to
  /// tie homology bases to the triangulation they were computed on.
  std::string fingerprint() const;

 private:
  void rebuild_topology();
  void relabel_vertices();

  std::vector<Vec2q> hp_;
  std::vector<Vec2> vec_;  // double copy of hp_
  std::vector<std::array<int, 3>> faces_;
  std::vector<int> next_, face_of_, origin_, ref_;
  int num_vertices_ = 0;
};

}  // namespace tsdyn
