#include "tsdyn/surface.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

bool segments_touch(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
  };
  auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2), o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool strictly_convex(Vec2 a, Vec2 b, Vec2 c, double scale) { return cross(b - a, c - b) > 1e-12 * scale; }

bool in_closed_triangle(Vec2 a, Vec2 b, Vec2 c, Vec2 p, double scale) {
  const double eps = -1e-12 * scale;
  return cross(b - a, p - a) >= eps && cross(c - b, p - b) >= eps && cross(a - c, p - c) >= eps;
}

// Ear clipping of one polygon whose sides already carry half-edges. New
// diagonals are appended to vec; faces are appended to faces.
void triangulate_polygon(const Polygon& poly, const std::vector<int>& side_he, std::vector<Vec2>& vec,
                         std::vector<std::array<int, 3>>& faces) {
  auto hvec = [&](int h) { return (h & 1) ? -vec[h >> 1] : vec[h >> 1]; };
  std::vector<int> ring(poly.size());
  std::iota(ring.begin(), ring.end(), 0);
  std::vector<int> he = side_he;
  double scale = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) scale = std::max(scale, (poly[(i + 1) % poly.size()] - poly[i]).norm2());
  while (ring.size() > 3) {
    const int n = static_cast<int>(ring.size());
    int ear = -1;
    for (int j = 0; j < n && ear < 0; ++j) {
      const int p = (j + n - 1) % n, q = (j + 1) % n;
      const Vec2 a = poly[ring[p]], b = poly[ring[j]], c = poly[ring[q]];
      if (!strictly_convex(a, b, c, scale)) continue;
      bool blocked = false;
      for (int m = 0; m < n && !blocked; ++m) {
        if (m == p || m == j || m == q) continue;
        blocked = in_closed_triangle(a, b, c, poly[ring[m]], scale);
      }
      if (!blocked) ear = j;
    }
    if (ear < 0) throw Error(ErrorCode::kNonSimplePolygon, "ear clipping found no ear");
    const int p = (ear + n - 1) % n;
    const int d = static_cast<int>(vec.size());
    vec.push_back(hvec(he[p]) + hvec(he[ear]));
    faces.push_back({he[p], he[ear], 2 * d + 1});
    he[p] = 2 * d;
    ring.erase(ring.begin() + ear);
    he.erase(he.begin() + ear);
  }
  faces.push_back({he[0], he[1], he[2]});
}

}  // namespace

double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * a;
}

bool polygon_is_simple(const Polygon& p) {
  const size_t n = p.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (p[i] == p[(i + 1) % n]) return false;
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  }
  return true;
}

TranslationSurface TranslationSurface::build(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                                             std::string label, const BuildOptions& opts) {
  if (polygons.empty()) throw Error(ErrorCode::kInvalidArgument, "no polygons");
  double total_area = 0.0;
  for (size_t i = 0; i < polygons.size(); ++i) {
    const Polygon& p = polygons[i];
    if (p.size() < 3) throw Error(ErrorCode::kInvalidArgument, "polygon " + std::to_string(i) + " has fewer than 3 vertices");
    if (!polygon_is_simple(p)) throw Error(ErrorCode::kNonSimplePolygon, "polygon " + std::to_string(i) + " is not simple");
    const double a = polygon_area(p);
    if (a <= 0.0) throw Error(ErrorCode::kInvalidArgument, "polygon " + std::to_string(i) + " is not counterclockwise");
    total_area += a;
  }

  std::vector<std::vector<int>> side_he(polygons.size());
  for (size_t i = 0; i < polygons.size(); ++i) side_he[i].assign(polygons[i].size(), -1);
  auto side_vec = [&](SideRef s) {
    const Polygon& p = polygons[s.polygon];
    return p[(s.side + 1) % p.size()] - p[s.side];
  };
  std::vector<Vec2> vec;
  const double tol = opts.edge_tolerance * std::sqrt(total_area);
  for (size_t g = 0; g < gluings.size(); ++g) {
    for (const SideRef* s : {&gluings[g].a, &gluings[g].b}) {
      if (s->polygon < 0 || s->polygon >= static_cast<int>(polygons.size()) || s->side < 0 ||
          s->side >= static_cast<int>(polygons[s->polygon].size()))
        throw Error(ErrorCode::kInvalidArgument, "gluing " + std::to_string(g) + " references a missing side");
      int& slot = side_he[s->polygon][s->side];
      if (slot >= 0)
        throw Error(ErrorCode::kInvalidArgument, "side (" + std::to_string(s->polygon) + "," + std::to_string(s->side) +
                                                     ") is glued twice");
      slot = static_cast<int>(2 * g + (s == &gluings[g].b ? 1 : 0));
    }
    const Vec2 va = side_vec(gluings[g].a), vb = side_vec(gluings[g].b);
    if ((va + vb).norm() > tol) {
      std::ostringstream os;
      os << "gluing " << g << " pairs sides with holonomy (" << va.x << "," << va.y << ") and (" << vb.x << ","
         << vb.y << ")";
      throw Error(ErrorCode::kNonMatchingEdge, os.str());
    }
    vec.push_back(va);
  }
  for (size_t i = 0; i < polygons.size(); ++i)
    for (size_t s = 0; s < polygons[i].size(); ++s)
      if (side_he[i][s] < 0)
        throw Error(ErrorCode::kInvalidArgument, "side (" + std::to_string(i) + "," + std::to_string(s) + ") is not glued");

  // Connectivity of the polygon graph.
  std::vector<int> comp(polygons.size());
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (const Gluing& g : gluings) comp[find(g.a.polygon)] = find(g.b.polygon);
  for (size_t i = 1; i < polygons.size(); ++i)
    if (find(static_cast<int>(i)) != find(0)) throw Error(ErrorCode::kDisconnected, "polygons form more than one component");

  std::vector<std::array<int, 3>> faces;
  for (size_t i = 0; i < polygons.size(); ++i) triangulate_polygon(polygons[i], side_he[i], vec, faces);

  TranslationSurface s;
  s.polygons_ = std::move(polygons);
  s.gluings_ = std::move(gluings);
  s.side_half_edge_ = std::move(side_he);
  s.tri_ = FlatTriangulation(std::move(vec), std::move(faces));
  s.label_ = std::move(label);
  s.compute_invariants(opts);
  return s;
}

TranslationSurface TranslationSurface::from_triangulation(const FlatTriangulation& tri, std::string label) {
  TranslationSurface s;
  s.tri_ = tri;
  s.label_ = std::move(label);
  std::vector<SideRef> where(tri.num_half_edges());
  for (int f = 0; f < tri.num_faces(); ++f) {
    const auto& fh = tri.face_half_edges(f);
    s.polygons_.push_back({Vec2{}, tri.vec(fh[0]), tri.vec(fh[0]) + tri.vec(fh[1])});
    s.side_half_edge_.push_back({fh[0], fh[1], fh[2]});
    for (int i = 0; i < 3; ++i) where[fh[i]] = {f, i};
  }
  for (int e = 0; e < tri.num_edges(); ++e) s.gluings_.push_back({where[2 * e], where[2 * e + 1]});
  s.compute_invariants({});
  return s;
}

void TranslationSurface::compute_invariants(const BuildOptions& opts) {
  tri_.check_nondegenerate();
  cone_points_.clear();
  int order_sum = 0;
  for (int v = 0; v < tri_.num_vertices(); ++v) {
    const double turns = tri_.cone_angle(v) / (2.0 * std::numbers::pi);
    const int m = static_cast<int>(std::lround(turns));
    if (m < 1 || std::abs(turns - m) * 2.0 * std::numbers::pi > opts.angle_tolerance) {
      std::ostringstream os;
      os << "cone angle at vertex " << v << " is " << turns << " x 2pi";
      throw Error(ErrorCode::kNegativeAngleDefect, os.str());
    }
    cone_points_.push_back({v, m});
    order_sum += m - 1;
  }
  const int chi = euler_characteristic();
  if (chi % 2 != 0 || chi > 2) throw Error(ErrorCode::kInternal, "invalid Euler characteristic");
  genus_ = (2 - chi) / 2;
  if (order_sum != 2 * genus_ - 2) throw Error(ErrorCode::kInternal, "Gauss-Bonnet violated: zero orders do not sum to 2g-2");
}

int TranslationSurface::euler_characteristic() const {
  return tri_.num_vertices() - tri_.num_edges() + tri_.num_faces();
}

std::vector<int> TranslationSurface::stratum() const {
  std::vector<int> out;
  for (const ConePoint& c : cone_points_)
    if (c.order() > 0) out.push_back(c.order());
  std::sort(out.rbegin(), out.rend());
  if (out.empty()) out.push_back(0);
  return out;
}

std::string TranslationSurface::stratum_label() const {
  std::string s = "H(";
  const auto st = stratum();
  for (size_t i = 0; i < st.size(); ++i) s += (i ? "," : "") + std::to_string(st[i]);
  return s + ")";
}

int TranslationSurface::num_marked_points() const {
  return static_cast<int>(std::count_if(cone_points_.begin(), cone_points_.end(),
                                        [](const ConePoint& c) { return c.order() == 0; }));
}

double TranslationSurface::area() const {
  double a = 0.0;
  for (const Polygon& p : polygons_) a += polygon_area(p);
  return a;
}

TranslationSurface TranslationSurface::transformed(const Mat2& g) const {
  TranslationSurface s = *this;
  for (Polygon& p : s.polygons_)
    for (Vec2& v : p) v = g * v;
  s.tri_.apply(g);
  return s;
}

TranslationSurface TranslationSurface::scaled(double f) const {
  TranslationSurface s = *this;
  for (Polygon& p : s.polygons_)
    for (Vec2& v : p) v = v * f;
  s.tri_.scale(f);
  return s;
}

double area(const TranslationSurface& s) { return s.area(); }

double symplectic_area(const TranslationSurface& s, const HomologyBasis& basis) {
  const auto per = period_map(s, basis);
  return wedge(basis, real_part(per), imag_part(per));
}

TranslationSurface normalize_area(const TranslationSurface& s) {
  const double a = s.area();
  if (!(a > 0.0)) throw Error(ErrorCode::kZeroArea, "surface has nonpositive area");
  if (std::abs(a - 1.0) < 4.0 * std::numeric_limits<double>::epsilon()) return s;
  return s.scaled(1.0 / std::sqrt(a));
}

HomologyBasis homology_basis(const TranslationSurface& s) { return compute_homology_basis(s.triangulation()); }

std::vector<Vec2> period_map(const TranslationSurface& s, const HomologyBasis& basis) {
  const FlatTriangulation& tri = s.triangulation();
  if (basis.fingerprint != tri.fingerprint())
    throw Error(ErrorCode::kBasisMismatch, "homology basis was computed on a different triangulation");
  std::vector<Vec2> out(basis.rank());
  for (int i = 0; i < basis.rank(); ++i) out[i] = tri.chain_holonomy(basis.relative_cycles[i]);
  return out;
}

TranslationSurface deform_by_periods(const TranslationSurface& s, const HomologyBasis& basis,
                                     const std::vector<Vec2>& delta, double eps) {
  std::vector<Vec2> per = period_map(s, basis);
  if (delta.size() != per.size()) throw Error(ErrorCode::kDimensionMismatch, "period delta has wrong length");
  for (size_t i = 0; i < per.size(); ++i) per[i] += delta[i] * eps;
  const FlatTriangulation& tri = s.triangulation();
  std::vector<Vec2> vec(tri.num_edges());
  for (int e = 0; e < tri.num_edges(); ++e)
    for (int i = 0; i < basis.rank(); ++i)
      if (basis.edge_coordinates(e, i)) vec[e] += per[i] * static_cast<double>(basis.edge_coordinates(e, i));

  TranslationSurface out = s;
  out.tri_.set_edge_vectors(std::move(vec));
  try {
    out.tri_.check_nondegenerate(1e-12);
  } catch (const Error& err) {
    throw Error(ErrorCode::kDegeneratePolygon, err.what());
  }
  for (size_t p = 0; p < out.polygons_.size(); ++p) {
    Polygon& poly = out.polygons_[p];
    for (size_t i = 0; i + 1 < poly.size(); ++i) poly[i + 1] = poly[i] + out.tri_.vec(out.side_half_edge_[p][i]);
    if (!polygon_is_simple(poly) || polygon_area(poly) <= 0.0)
      throw Error(ErrorCode::kDegeneratePolygon, "polygon " + std::to_string(p) + " degenerates under the deformation");
  }
  out.compute_invariants({});
  return out;
}

std::vector<double> real_part(const std::vector<Vec2>& v) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].x;
  return out;
}

std::vector<double> imag_part(const std::vector<Vec2>& v) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].y;
  return out;
}

}  // namespace tsdyn
