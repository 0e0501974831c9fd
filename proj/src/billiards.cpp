#include "tsdyn/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

Rational reduced(int64_t p, int64_t q) {
  if (q <= 0 || p <= 0) throw Error(ErrorCode::kIrrationalAngle, "angle must be a positive rational");
  const int64_t g = std::gcd(p, q);
  return {p / g, q / g};
}

double to_radians(Rational r) { return std::numbers::pi * static_cast<double>(r.p) / static_cast<double>(r.q); }

void check_angle_sum(const std::vector<Rational>& angles) {
  int64_t n = 1;
  for (const Rational& a : angles) n = std::lcm(n, a.q);
  int64_t total = 0;
  for (const Rational& a : angles) total = checked_add(total, checked_mul(a.p, n / a.q));
  if (total != checked_mul(static_cast<int64_t>(angles.size()) - 2, n))
    throw Error(ErrorCode::kInvalidArgument, "interior angles do not sum to (n-2) pi");
}

}  // namespace

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      const int64_t p = std::stoll(s, &used);
      if (used != s.size()) throw Error(ErrorCode::kIrrationalAngle, "angle '" + s + "' is not of the form p/q");
      return reduced(p, 1);
    }
    const std::string ps = s.substr(0, slash), qs = s.substr(slash + 1);
    const int64_t p = std::stoll(ps, &used);
    if (used != ps.size()) throw Error(ErrorCode::kIrrationalAngle, "angle '" + s + "' is not of the form p/q");
    const int64_t q = std::stoll(qs, &used);
    if (used != qs.size()) throw Error(ErrorCode::kIrrationalAngle, "angle '" + s + "' is not of the form p/q");
    return reduced(p, q);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kIrrationalAngle, "angle '" + s + "' is not of the form p/q");
  }
}

RationalPolygon rational_polygon(const std::vector<Rational>& angles_in, const std::vector<double>& lengths) {
  const size_t n = angles_in.size();
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "polygon needs at least 3 angles");
  RationalPolygon out;
  for (const Rational& a : angles_in) {
    if (a.q == 0) throw Error(ErrorCode::kIrrationalAngle, "angle without a denominator");
    out.angles.push_back(reduced(a.p, a.q));
  }
  check_angle_sum(out.angles);
  std::vector<double> len = lengths;
  if (len.empty()) {
    if (n != 3) throw Error(ErrorCode::kInvalidArgument, "side lengths are required for polygons with more than 3 sides");
    const double a0 = to_radians(out.angles[0]), a1 = to_radians(out.angles[1]), a2 = to_radians(out.angles[2]);
    len = {1.0, std::sin(a0) / std::sin(a2), std::sin(a1) / std::sin(a2)};
  }
  if (len.size() != n) throw Error(ErrorCode::kInvalidArgument, "need one side length per angle");
  Vec2 p{0.0, 0.0};
  double heading = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(len[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "side lengths must be positive");
    out.vertices.push_back(p);
    p += Vec2{std::cos(heading), std::sin(heading)} * len[i];
    heading += std::numbers::pi - to_radians(out.angles[(i + 1) % n]);
  }
  double perimeter = 0.0;
  for (double l : len) perimeter += l;
  if (p.norm() > 1e-9 * perimeter) throw Error(ErrorCode::kInvalidArgument, "angles and side lengths do not close up");
  if (!polygon_is_simple(out.vertices)) throw Error(ErrorCode::kNonSimplePolygon, "polygon is not simple");
  return out;
}

RationalPolygon rational_polygon_from_vertices(const Polygon& vertices, int64_t max_denominator) {
  const size_t n = vertices.size();
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "polygon needs at least 3 vertices");
  if (!polygon_is_simple(vertices)) throw Error(ErrorCode::kNonSimplePolygon, "polygon is not simple");
  if (polygon_area(vertices) <= 0.0) throw Error(ErrorCode::kInvalidArgument, "polygon is not counterclockwise");
  RationalPolygon out;
  out.vertices = vertices;
  for (size_t i = 0; i < n; ++i) {
    const Vec2 in = vertices[i] - vertices[(i + n - 1) % n];
    const Vec2 outv = vertices[(i + 1) % n] - vertices[i];
    const double interior = std::numbers::pi - std::atan2(cross(in, outv), dot(in, outv));
    const double t = interior / std::numbers::pi;
    bool found = false;
    for (int64_t q = 1; q <= max_denominator && !found; ++q) {
      const int64_t p = std::llround(t * static_cast<double>(q));
      if (p > 0 && std::abs(t - static_cast<double>(p) / static_cast<double>(q)) < 1e-9) {
        out.angles.push_back(reduced(p, q));
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kIrrationalAngle, "angle at vertex " + std::to_string(i) + " is not rational");
  }
  check_angle_sum(out.angles);
  return out;
}

UnfoldingResult unfold(const RationalPolygon& poly) {
  const size_t n = poly.vertices.size();
  if (n < 3 || poly.angles.size() != n) throw Error(ErrorCode::kInvalidArgument, "polygon needs one angle per vertex");
  for (const Rational& a : poly.angles)
    if (a.q <= 0 || a.p <= 0) throw Error(ErrorCode::kIrrationalAngle, "angle is not a positive rational");
  if (!polygon_is_simple(poly.vertices)) throw Error(ErrorCode::kNonSimplePolygon, "polygon is not simple");
  if (polygon_area(poly.vertices) <= 0.0) throw Error(ErrorCode::kInvalidArgument, "polygon is not counterclockwise");
  check_angle_sum(poly.angles);
  for (size_t i = 0; i < n; ++i) {
    const Vec2 in = poly.vertices[i] - poly.vertices[(i + n - 1) % n];
    const Vec2 outv = poly.vertices[(i + 1) % n] - poly.vertices[i];
    const double interior = std::numbers::pi - std::atan2(cross(in, outv), dot(in, outv));
    if (std::abs(interior - to_radians(poly.angles[i])) > 1e-9)
      throw Error(ErrorCode::kInvalidArgument, "angle at vertex " + std::to_string(i) + " disagrees with the vertices");
  }

  int64_t big_n = 1;
  for (const Rational& a : poly.angles) big_n = std::lcm(big_n, a.q);

  // Put side 0 on the positive x-axis; side i then has direction m_i pi / N.
  const Vec2 s0 = poly.vertices[1] - poly.vertices[0];
  const Mat2 align = Mat2::rotation(-std::atan2(s0.y, s0.x));
  Polygon base;
  for (const Vec2& v : poly.vertices) base.push_back(align * (v - poly.vertices[0]));
  std::vector<int64_t> m(n, 0);
  for (size_t i = 1; i < n; ++i) m[i] = m[i - 1] + big_n - poly.angles[i].p * (big_n / poly.angles[i].q);

  const int64_t order = 2 * big_n;
  auto index = [&](DihedralElement g) {
    return static_cast<size_t>(g.reflection * big_n + ((g.rotation % big_n) + big_n) % big_n);
  };
  auto compose = [&](DihedralElement a, DihedralElement b) {
    DihedralElement c;
    c.rotation = ((a.rotation + (a.reflection ? -b.rotation : b.rotation)) % big_n + big_n) % big_n;
    c.reflection = (a.reflection + b.reflection) % 2;
    return c;
  };
  auto matrix = [&](DihedralElement g) {
    const Mat2 r = Mat2::rotation(2.0 * std::numbers::pi * static_cast<double>(g.rotation) / static_cast<double>(big_n));
    return g.reflection ? r * Mat2{1.0, 0.0, 0.0, -1.0} : r;
  };

  UnfoldingResult out;
  out.group_order = order;
  std::vector<Polygon> polys(order);
  out.copy_map.resize(order);
  for (int64_t s = 0; s < 2; ++s)
    for (int64_t j = 0; j < big_n; ++j) {
      const DihedralElement g{j, static_cast<int>(s)};
      const size_t idx = index(g);
      out.copy_map[idx] = g;
      const Mat2 mg = matrix(g);
      Polygon& p = polys[idx];
      for (size_t i = 0; i < n; ++i) p.push_back(mg * base[s ? (n - i) % n : i]);
    }
  auto copy_side = [&](DihedralElement g, size_t side) {
    return static_cast<int>(g.reflection ? (n - 1 - side) % n : side);
  };
  std::vector<Gluing> gluings;
  for (size_t idx = 0; idx < static_cast<size_t>(order); ++idx) {
    const DihedralElement g = out.copy_map[idx];
    for (size_t i = 0; i < n; ++i) {
      const DihedralElement h = compose(g, DihedralElement{m[i], 1});
      const size_t hdx = index(h);
      if (hdx <= idx) continue;
      gluings.push_back({{static_cast<int>(idx), copy_side(g, i)}, {static_cast<int>(hdx), copy_side(h, i)}});
    }
  }
  std::string label = "unfolding(";
  for (size_t i = 0; i < n; ++i)
    label += (i ? "," : "") + std::to_string(poly.angles[i].p) + "/" + std::to_string(poly.angles[i].q);
  label += ")";
  out.surface = TranslationSurface::build(std::move(polys), std::move(gluings), label);

  int order_sum = 0;
  for (size_t i = 0; i < n; ++i)
    for (int64_t c = 0; c < big_n / poly.angles[i].q; ++c) {
      out.predicted_cone_multiples.push_back(static_cast<int>(poly.angles[i].p));
      order_sum += static_cast<int>(poly.angles[i].p) - 1;
    }
  std::sort(out.predicted_cone_multiples.begin(), out.predicted_cone_multiples.end());
  out.predicted_genus = order_sum / 2 + 1;

  std::vector<int> actual;
  for (const ConePoint& c : out.surface.cone_points()) actual.push_back(c.angle_multiple);
  std::sort(actual.begin(), actual.end());
  if (actual != out.predicted_cone_multiples || out.surface.genus() != out.predicted_genus)
    throw Error(ErrorCode::kInternal, "unfolded cone angles disagree with the angle prediction");
  const double expected_area = static_cast<double>(order) * polygon_area(poly.vertices);
  if (std::abs(out.surface.area() - expected_area) > 1e-9 * std::max(1.0, expected_area))
    throw Error(ErrorCode::kInternal, "unfolded area is not group order times polygon area");
  return out;
}

}  // namespace tsdyn
