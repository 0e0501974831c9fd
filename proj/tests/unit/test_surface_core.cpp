#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/flow.hpp"
#include "tsdyn/integer_matrix.hpp"
#include "tsdyn/surface.hpp"

using namespace tsdyn;
using tsdyn::test::load;

namespace {

Polygon square(double w = 1.0, double h = 1.0) { return {{0, 0}, {w, 0}, {w, h}, {0, h}}; }

std::vector<Gluing> opposite_sides() { return {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Cone angles over 2 pi from interior polygon angles summed per corner class.
std::vector<double> cone_angle_oracle(const TranslationSurface& s) {
  const auto cls = test::corner_classes(s.polygons(), s.gluings());
  std::map<int, double> sum;
  int idx = 0;
  for (const Polygon& p : s.polygons())
    for (size_t i = 0; i < p.size(); ++i, ++idx) {
      const Vec2 prev = p[(i + p.size() - 1) % p.size()], next = p[(i + 1) % p.size()];
      sum[cls[idx]] += ccw_angle(next - p[i], prev - p[i]);
    }
  std::vector<double> out;
  for (const auto& [k, v] : sum) out.push_back(v / (2 * std::numbers::pi));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("unit square with opposite sides glued is a flat torus") {
  const auto s = TranslationSurface::build({square()}, opposite_sides(), "sq");
  CHECK(s.genus() == 1);
  CHECK(s.stratum_label() == "H(0)");
  CHECK(s.cone_points().size() == 1);
  CHECK(s.cone_points()[0].angle_multiple == 1);
  CHECK(s.area() == doctest::Approx(1.0));
  CHECK(s.homology_rank() == 2);
}

TEST_CASE("double pentagon invariants match the Euler characteristic and angle oracles") {
  const auto s = load("double_pentagon");
  const int chi = test::euler_characteristic_oracle(s.polygons(), s.gluings());
  CHECK(chi == -2);
  CHECK(s.euler_characteristic() == chi);
  CHECK(s.genus() == (2 - chi) / 2);
  const auto angles = cone_angle_oracle(s);
  REQUIRE(angles.size() == 1);
  CHECK(angles[0] == doctest::Approx(3.0));
  CHECK(s.cone_points()[0].angle_multiple == 3);
  CHECK(s.stratum() == std::vector<int>{2});
  CHECK(s.stratum_label() == "H(2)");
}

TEST_CASE("every corpus surface satisfies Gauss-Bonnet") {
  for (const auto& n : test::corpus_names()) {
    const auto s = load(n);
    const auto angles = cone_angle_oracle(s);
    int orders = 0;
    for (double a : angles) {
      CHECK(a == doctest::Approx(std::round(a)));
      orders += static_cast<int>(std::round(a)) - 1;
    }
    CHECK(orders == 2 * s.genus() - 2);
  }
}

TEST_CASE("hexagonal torus has two cone points of angle 2 pi") {
  const auto s = load("hexagonal_torus");
  CHECK(s.genus() == 1);
  const auto angles = cone_angle_oracle(s);
  REQUIRE(angles.size() == 2);
  for (double a : angles) CHECK(a == doctest::Approx(1.0));
  CHECK(s.num_marked_points() == 2);
  CHECK(s.homology_rank() == 3);
}

TEST_CASE("construction errors") {
  SUBCASE("mismatched side lengths") {
    Polygon p = {{0, 0}, {1, 0}, {1.5, 1}, {0, 1}};
    CHECK(code_of([&] { TranslationSurface::build({p}, opposite_sides()); }) == ErrorCode::kNonMatchingEdge);
  }
  SUBCASE("two separate tori") {
    Polygon b = square();
    for (auto& v : b) v.x += 3.0;
    const std::vector<Gluing> g = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}, {{1, 0}, {1, 2}}, {{1, 1}, {1, 3}}};
    CHECK(code_of([&] { TranslationSurface::build({square(), b}, g); }) == ErrorCode::kDisconnected);
  }
  SUBCASE("side glued twice") {
    const std::vector<Gluing> g = {{{0, 0}, {0, 2}}, {{0, 0}, {0, 2}}};
    CHECK(code_of([&] { TranslationSurface::build({square()}, g); }) == ErrorCode::kInvalidArgument);
  }
  SUBCASE("clockwise polygon") {
    Polygon p = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK(code_of([&] { TranslationSurface::build({p}, opposite_sides()); }) != ErrorCode::kInternal);
  }
}

TEST_CASE("area from shoelace agrees with the symplectic pairing of periods") {
  for (const auto& n : test::corpus_names()) {
    const auto s = load(n);
    double oracle = 0.0;
    for (const auto& p : s.polygons()) oracle += test::shoelace(p);
    CHECK(s.area() == doctest::Approx(oracle).epsilon(1e-12));
    const auto basis = homology_basis(s);
    CHECK(symplectic_area(s, basis) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("area is invariant under SL(2,R)") {
  const auto s = test::load_unit("double_pentagon");
  for (double t : {0.5, 2.0, -1.3}) {
    const auto g = apply_sl2(s, Mat2::geodesic(t) * Mat2::rotation(0.4));
    CHECK(g.area() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(normalize_area(load("double_pentagon")).area() == doctest::Approx(1.0));
}

TEST_CASE("homology basis is symplectic and closed on the absolute part") {
  for (const auto& n : test::corpus_names()) {
    const auto s = load(n);
    const auto b = homology_basis(s);
    CHECK(b.rank() == 2 * s.genus() + static_cast<int>(s.cone_points().size()) - 1);
    CHECK(b.intersection_matrix == standard_symplectic(s.genus()));
    CHECK(exact_determinant(b.intersection_matrix) == "1");
    for (int i = 0; i < b.rank(); ++i) {
      const auto bd = chain_boundary(s.triangulation(), b.relative_cycles[i]);
      int64_t total = 0;
      for (int64_t x : bd) total += x;
      CHECK(total == 0);
      if (i < b.absolute_rank())
        for (int64_t x : bd) CHECK(x == 0);
    }
  }
}

TEST_CASE("edge holonomy is the integer combination of basis periods") {
  for (const auto& n : test::corpus_names()) {
    const auto s = load(n);
    const auto b = homology_basis(s);
    const auto per = period_map(s, b);
    const auto& tri = s.triangulation();
    for (int e = 0; e < tri.num_edges(); ++e) {
      Vec2 sum;
      for (int j = 0; j < b.rank(); ++j) sum += per[j] * static_cast<double>(b.edge_coordinates(e, j));
      CHECK((sum - tri.edge_vector(e)).norm() < 1e-12);
    }
  }
}

TEST_CASE("deform_by_periods moves periods by eps * delta") {
  const auto s = load("double_pentagon");
  const auto b = homology_basis(s);
  const auto per = period_map(s, b);
  std::vector<Vec2> delta(b.rank());
  for (int i = 0; i < b.rank(); ++i) delta[i] = {0.1 * (i + 1), -0.05 * i};
  const auto d = deform_by_periods(s, b, delta, 0.01);
  const auto per2 = period_map(d, b);
  for (int i = 0; i < b.rank(); ++i) CHECK((per2[i] - (per[i] + 0.01 * delta[i])).norm() < 1e-12);
  CHECK(d.genus() == 2);
}

TEST_CASE("surface JSON round trip") {
  const auto s = load("double_pentagon");
  const auto r = surface_from_json(surface_to_json(s));
  CHECK(r.genus() == s.genus());
  CHECK(r.area() == doctest::Approx(s.area()).epsilon(1e-15));
  CHECK(r.label() == "double_pentagon");
  CHECK(surface_to_json(r)["schema"] == kSurfaceSchema);
  CHECK(code_of([] { surface_from_json(nlohmann::json::parse(R"({"polygons": 3})")); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("integer matrix algorithms") {
  const IntMatrix a = IntMatrix::from_rows({{2, 1}, {1, 1}});
  CHECK(exact_determinant(a) == "1");
  CHECK(a * unimodular_inverse(a) == IntMatrix::identity(2));
  CHECK(is_symplectic(a, standard_symplectic(1)));
  CHECK_FALSE(is_symplectic(IntMatrix::from_rows({{2, 0}, {0, 1}}), standard_symplectic(1)));
  CHECK(code_of([] { unimodular_inverse(IntMatrix::from_rows({{2, 0}, {0, 1}})); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { checked_mul(int64_t{1} << 40, int64_t{1} << 40); }) == ErrorCode::kOverflow);

  const IntMatrix m = IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}});
  const IntMatrix k = integer_kernel(m);
  CHECK(k.rows() == 2);
  CHECK(m * k.transpose() == IntMatrix(2, 2));

  // The standard form in a scrambled basis.
  const IntMatrix u = IntMatrix::from_rows({{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 3, 1, 0}, {2, 0, 1, 1}});
  const IntMatrix form = u * standard_symplectic(2) * u.transpose();
  const IntMatrix p = symplectic_reduction(form);
  CHECK(p * form * p.transpose() == standard_symplectic(2));
}
