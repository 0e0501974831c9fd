#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "tsdyn/billiards.hpp"
#include "tsdyn/errors.hpp"

using namespace tsdyn;

namespace {

std::vector<Rational> angles(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
  return out;
}

// Genus of the unfolding of a k-gon with angles pi m_i / n_i:
// g = 1 + (N/2) (k - 2 - sum 1/n_i), N = lcm n_i.
int genus_formula(const std::vector<Rational>& a) {
  int64_t n = 1;
  for (const auto& r : a) n = std::lcm(n, r.q);
  int64_t twice = 2 * n * (static_cast<int64_t>(a.size()) - 2);
  for (const auto& r : a) twice -= 2 * n / r.q;
  return static_cast<int>(1 + twice / 4);
}

// Vertex with angle pi m/n becomes N/n cone points of angle 2 pi m.
std::vector<int> cone_multiples_formula(const std::vector<Rational>& a) {
  int64_t n = 1;
  for (const auto& r : a) n = std::lcm(n, r.q);
  std::vector<int> out;
  for (const auto& r : a)
    for (int64_t i = 0; i < n / r.q; ++i) out.push_back(static_cast<int>(r.p));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> cone_multiples(const TranslationSurface& s) {
  std::vector<int> out;
  for (const auto& c : s.cone_points()) out.push_back(c.angle_multiple);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("parse_rational") {
  CHECK(parse_rational("2/10").p == 1);
  CHECK(parse_rational("2/10").q == 5);
  CHECK(parse_rational("3").q == 1);
  for (const char* bad : {"0.2", "1/0", "-1/3", "a/b", "1/3x", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
}

TEST_CASE("unfolded genus and cone points follow the angle formulas") {
  for (const char* csv : {"1/3,1/3,1/3", "1/5,1/5,3/5", "1/2,1/4,1/4", "1/2,1/3,1/6", "1/7,2/7,4/7", "1/4,1/4,1/2",
                          "2/5,2/5,1/5"}) {
    CAPTURE(csv);
    const auto a = angles(csv);
    const auto u = unfold(rational_polygon(a));
    const int chi = test::euler_characteristic_oracle(u.surface.polygons(), u.surface.gluings());
    CHECK(u.surface.genus() == genus_formula(a));
    CHECK(2 - 2 * u.surface.genus() == chi);
    CHECK(cone_multiples(u.surface) == cone_multiples_formula(a));
    int64_t n = 1;
    for (const auto& r : a) n = std::lcm(n, r.q);
    CHECK(u.group_order == 2 * n);
    CHECK(static_cast<int64_t>(u.surface.polygons().size()) == 2 * n);
    CHECK(u.surface.area() == doctest::Approx(2 * n * polygon_area(rational_polygon(a).vertices)));
  }
}

TEST_CASE("(1/5,1/5,3/5) unfolds into H(2) and the equilateral triangle into a torus") {
  const auto dp = unfold(rational_polygon(angles("1/5,1/5,3/5"))).surface;
  CHECK(dp.genus() == 2);
  CHECK(dp.stratum_label() == "H(2)");
  const auto eq = unfold(rational_polygon(angles("1/3,1/3,1/3"))).surface;
  CHECK(eq.genus() == 1);
}

TEST_CASE("quadrilaterals with explicit side lengths") {
  const auto sq = rational_polygon(angles("1/2,1/2,1/2,1/2"), {1.0, 2.0, 1.0, 2.0});
  CHECK(polygon_area(sq.vertices) == doctest::Approx(2.0));
  const auto u = unfold(sq);
  CHECK(u.surface.genus() == 1);
  CHECK(u.group_order == 4);
  CHECK_THROWS_AS(rational_polygon(angles("1/2,1/2,1/2,1/2")), Error);
  CHECK_THROWS_AS(rational_polygon(angles("1/2,1/2,1/2,1/2"), {1.0, 2.0, 1.0, 1.0}), Error);
}

TEST_CASE("angles are recovered from vertices") {
  const Polygon tri = {{0, 0}, {1, 0}, {0, 1}};
  const auto p = rational_polygon_from_vertices(tri);
  REQUIRE(p.angles.size() == 3);
  CHECK(p.angles[0].p == 1);
  CHECK(p.angles[0].q == 2);
  CHECK(p.angles[1].q == 4);
  const Polygon irr = {{0, 0}, {1, 0}, {0.3, 0.77}};
  CHECK_THROWS_AS(rational_polygon_from_vertices(irr, 50), Error);
}

TEST_CASE("angle sums that do not close are rejected") {
  try {
    rational_polygon(angles("1/3,1/3,1/2"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}
