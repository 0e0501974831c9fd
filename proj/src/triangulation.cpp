#include "tsdyn/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tsdyn/errors.hpp"

namespace tsdyn {

FlatTriangulation::FlatTriangulation(std::vector<Vec2> edge_vectors, std::vector<std::array<int, 3>> faces)
    : vec_(std::move(edge_vectors)), faces_(std::move(faces)) {
  hp_.reserve(vec_.size());
  for (const Vec2& v : vec_) hp_.emplace_back(v);
  const int nh = num_half_edges();
  if (3 * num_faces() != nh) throw Error(ErrorCode::kInvalidArgument, "face count does not match edge count");
  std::vector<int> seen(nh, 0);
  for (const auto& f : faces_)
    for (int h : f) {
      if (h < 0 || h >= nh) throw Error(ErrorCode::kInvalidArgument, "half-edge index out of range");
      if (seen[h]++) throw Error(ErrorCode::kInvalidArgument, "half-edge used by two faces");
    }
  rebuild_topology();
}

void FlatTriangulation::rebuild_topology() {
  const int nh = num_half_edges();
  next_.assign(nh, -1);
  face_of_.assign(nh, -1);
  for (int f = 0; f < num_faces(); ++f)
    for (int i = 0; i < 3; ++i) {
      next_[faces_[f][i]] = faces_[f][(i + 1) % 3];
      face_of_[faces_[f][i]] = f;
    }
  relabel_vertices();
}

void FlatTriangulation::relabel_vertices() {
  const int nh = num_half_edges();
  origin_.assign(nh, -1);
  ref_.clear();
  num_vertices_ = 0;
  for (int h = 0; h < nh; ++h) {
    if (origin_[h] >= 0) continue;
    int x = h;
    do {
      origin_[x] = num_vertices_;
      x = rotate_ccw(x);
    } while (x != h);
    ref_.push_back(h);
    ++num_vertices_;
  }
}

double FlatTriangulation::corner_angle(int h) const { return angle_between(vec(h), -vec(prev(h))); }

double FlatTriangulation::cone_angle(int v) const {
  double total = 0.0;
  const int start = ref_[v];
  int x = start;
  do {
    total += corner_angle(x);
    x = rotate_ccw(x);
  } while (x != start);
  return total;
}

double FlatTriangulation::angle_offset(int h) const {
  double total = 0.0;
  int x = ref_[origin_[h]];
  while (x != h) {
    total += corner_angle(x);
    x = rotate_ccw(x);
  }
  return total;
}

double FlatTriangulation::area() const {
  double a = 0.0;
  for (const auto& f : faces_) a += 0.5 * cross(vec(f[0]), vec(f[1]));
  return a;
}

double FlatTriangulation::shortest_edge() const {
  double m = INFINITY;
  for (const Vec2& v : vec_) m = std::min(m, v.norm());
  return m;
}

double FlatTriangulation::longest_edge() const {
  double m = 0.0;
  for (const Vec2& v : vec_) m = std::max(m, v.norm());
  return m;
}

Vec2 FlatTriangulation::chain_holonomy(const std::vector<int64_t>& chain) const {
  Vec2q acc;
  for (int e = 0; e < num_edges(); ++e)
    if (chain[e]) {
      const __float128 c = static_cast<__float128>(chain[e]);
      acc.x += c * hp_[e].x;
      acc.y += c * hp_[e].y;
    }
  return acc.to_double();
}

void FlatTriangulation::apply(const Mat2& m) {
  const __float128 a = m.a, b = m.b, c = m.c, d = m.d;
  for (size_t e = 0; e < hp_.size(); ++e) {
    Vec2q& v = hp_[e];
    if (m.b == 0.0 && m.c == 0.0) {
      v = {a * v.x, d * v.y};
    } else {
      v = {a * v.x + b * v.y, c * v.x + d * v.y};
    }
    vec_[e] = v.to_double();
  }
}

void FlatTriangulation::scale(double s) {
  const __float128 q = s;
  for (size_t e = 0; e < hp_.size(); ++e) {
    hp_[e] = {q * hp_[e].x, q * hp_[e].y};
    vec_[e] = hp_[e].to_double();
  }
}

void FlatTriangulation::set_edge_vectors(std::vector<Vec2> v) {
  if (v.size() != vec_.size()) throw Error(ErrorCode::kDimensionMismatch, "edge vector count mismatch");
  vec_ = std::move(v);
  for (size_t e = 0; e < vec_.size(); ++e) hp_[e] = Vec2q(vec_[e]);
}

void FlatTriangulation::set_edge_vectors_from_classes(const std::vector<std::vector<int64_t>>& coeffs,
                                                      const std::vector<Vec2q>& per) {
  if (coeffs.size() != vec_.size()) throw Error(ErrorCode::kDimensionMismatch, "edge class count mismatch");
  for (size_t e = 0; e < coeffs.size(); ++e) {
    Vec2q acc;
    for (size_t i = 0; i < per.size(); ++i)
      if (coeffs[e][i]) {
        const __float128 c = static_cast<__float128>(coeffs[e][i]);
        acc.x += c * per[i].x;
        acc.y += c * per[i].y;
      }
    hp_[e] = acc;
    vec_[e] = acc.to_double();
  }
}

double FlatTriangulation::opposite_angle_sum(int e) const {
  const int h = 2 * e;
  return corner_angle(prev(h)) + corner_angle(prev(twin(h)));
}

bool FlatTriangulation::needs_flip(int e, double hysteresis) const {
  return opposite_angle_sum(e) > std::numbers::pi + hysteresis;
}

FlipRecord FlatTriangulation::flip(int e) {
  const int h = 2 * e, ht = h + 1;
  const int a1 = next_[h], a2 = next_[a1];
  const int b1 = next_[ht], b2 = next_[b1];
  const int f1 = face_of_[h], f2 = face_of_[ht];
  const Vec2q hb2 = (b2 & 1) ? -hp_[b2 >> 1] : hp_[b2 >> 1];
  const Vec2q ha1 = (a1 & 1) ? -hp_[a1 >> 1] : hp_[a1 >> 1];
  hp_[e] = hb2 + ha1;
  vec_[e] = hp_[e].to_double();
  faces_[f1] = {h, a2, b1};
  faces_[f2] = {ht, b2, a1};
  for (int f : {f1, f2})
    for (int i = 0; i < 3; ++i) {
      next_[faces_[f][i]] = faces_[f][(i + 1) % 3];
      face_of_[faces_[f][i]] = f;
    }
  relabel_vertices();
  return {e, a1, b2};
}

int FlatTriangulation::make_delaunay(const std::function<void(const FlipRecord&)>& on_flip, double hysteresis,
                                     int max_flips) {
  std::vector<int> stack(num_edges());
  std::vector<char> queued(num_edges(), 1);
  for (int e = 0; e < num_edges(); ++e) stack[e] = num_edges() - 1 - e;
  int flips = 0;
  while (!stack.empty()) {
    const int e = stack.back();
    stack.pop_back();
    queued[e] = 0;
    if (!needs_flip(e, hysteresis)) continue;
    const FlipRecord rec = flip(e);
    if (on_flip) on_flip(rec);
    if (++flips > max_flips) throw Error(ErrorCode::kInternal, "Delaunay flip loop did not terminate");
    const int h = 2 * e;
    for (int x : {next_[h], prev(h), next_[h + 1], prev(h + 1)}) {
      const int ex = edge_of(x);
      if (!queued[ex]) {
        queued[ex] = 1;
        stack.push_back(ex);
      }
    }
  }
  return flips;
}

bool FlatTriangulation::is_delaunay(double hysteresis) const {
  for (int e = 0; e < num_edges(); ++e)
    if (needs_flip(e, hysteresis)) return false;
  return true;
}

void FlatTriangulation::check_nondegenerate(double rel_tol) const {
  for (int f = 0; f < num_faces(); ++f) {
    const Vec2 u = vec(faces_[f][0]), v = vec(faces_[f][1]);
    if (cross(u, v) <= rel_tol * u.norm() * v.norm()) {
      std::ostringstream os;
      os << "triangle " << f << " collapsed (oriented area " << 0.5 * cross(u, v) << ")";
      throw Error(ErrorCode::kDegenerateTriangle, os.str());
    }
  }
}

std::string FlatTriangulation::fingerprint() const {
  std::ostringstream os;
  os << num_edges() << ':';
  for (const auto& f : faces_) os << f[0] << ',' << f[1] << ',' << f[2] << ';';
  return os.str();
}

}  // namespace tsdyn
