#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "support.hpp"
#include "tsdyn/counting.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/flow.hpp"

using namespace tsdyn;
using tsdyn::test::load_unit;

namespace {

// Primitive integer vectors of length <= T, up to sign.
int64_t lattice_count(double T) {
  const int64_t r = static_cast<int64_t>(std::floor(T));
  int64_t n = 0;
  for (int64_t p = 0; p <= r; ++p)
    for (int64_t q = -r; q <= r; ++q) {
      if (p == 0 && q <= 0) continue;
      if (std::gcd(p, std::abs(q)) == 1 && static_cast<double>(p * p + q * q) <= T * T) ++n;
    }
  return n;
}

}  // namespace

TEST_CASE("square torus saddle connections are primitive lattice vectors") {
  const auto s = load_unit("square_torus");
  for (double L : {1.0, 2.5, 7.3}) {
    const auto c = enumerate_saddle_connections(s, L);
    CHECK(static_cast<int64_t>(c.size()) == 2 * lattice_count(L));
    for (const auto& sc : c) {
      CHECK(std::abs(sc.holonomy.x - std::round(sc.holonomy.x)) < 1e-9);
      CHECK(std::abs(sc.holonomy.y - std::round(sc.holonomy.y)) < 1e-9);
    }
  }
}

TEST_CASE("square torus cylinder counts equal the lattice oracle") {
  const auto s = load_unit("square_torus");
  const auto cat = enumerate_cylinders(s, 20.0);
  for (double T = 0.5; T <= 20.0; T += 0.37) {
    CAPTURE(T);
    CHECK(count_N(cat, T) == lattice_count(T));
  }
  for (const auto& c : cat.cylinders) CHECK(c.area() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cylinders in each direction of a Veech surface fill it") {
  // Parallel cylinders differ in circumference by at most the golden ratio.
  const auto s = load_unit("double_pentagon");
  const auto cat = enumerate_cylinders(s, 8.0);
  std::map<long, double> area_by_direction;
  std::map<long, double> shortest;
  for (const auto& c : cat.cylinders) {
    const long key = std::lround(std::atan2(c.holonomy.y, c.holonomy.x) * 1e6);
    area_by_direction[key] += c.area();
    if (!shortest.count(key) || c.circumference < shortest[key]) shortest[key] = c.circumference;
  }
  int checked = 0;
  for (const auto& [dir, a] : area_by_direction) {
    if (shortest[dir] * std::numbers::phi > 8.0 - 1e-6) continue;
    CHECK(a == doctest::Approx(1.0).epsilon(1e-7));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("counts are invariant under rotation") {
  const auto s = load_unit("double_pentagon");
  const auto a = enumerate_saddle_connections(s, 4.0);
  const auto b = enumerate_saddle_connections(apply_sl2(s, Mat2::rotation(0.3)), 4.0);
  CHECK(a.size() == b.size());
  const auto ca = enumerate_cylinders(s, 6.0), cb = enumerate_cylinders(apply_sl2(s, Mat2::rotation(1.3)), 6.0);
  CHECK(ca.cylinders.size() == cb.cylinders.size());
}

TEST_CASE("parallel workers give the same catalog") {
  const auto s = load_unit("hexagonal_torus");
  EnumerationOptions one, four;
  four.workers = 4;
  const auto a = enumerate_cylinders(s, 15.0, one), b = enumerate_cylinders(s, 15.0, four);
  REQUIRE(a.cylinders.size() == b.cylinders.size());
  for (size_t i = 0; i < a.cylinders.size(); ++i)
    CHECK(a.cylinders[i].circumference == doctest::Approx(b.cylinders[i].circumference).epsilon(1e-12));
  CHECK(a.connections.size() == b.connections.size());
}

TEST_CASE("tracked paths sum to the holonomy") {
  const auto s = load_unit("double_pentagon");
  EnumerationOptions o;
  o.track_paths = true;
  const auto& tri = s.triangulation();
  for (const auto& c : enumerate_saddle_connections(s, 3.0, o)) {
    Vec2 sum;
    for (int h : c.chart_path) sum += tri.vec(h);
    CHECK((sum - c.holonomy).norm() < 1e-9);
    CHECK((tri.chain_holonomy(c.chain) - c.holonomy).norm() < 1e-9);
  }
}

TEST_CASE("budget and bound errors") {
  const auto s = load_unit("double_pentagon");
  EnumerationOptions o;
  o.budget = 100;
  try {
    enumerate_saddle_connections(s, 20.0, o);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
  const auto cat = enumerate_cylinders(s, 3.0);
  try {
    count_N(cat, 3.5);
    FAIL("expected BoundExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundExceeded);
  }
}

TEST_CASE("counting report from the square torus catalog") {
  const auto s = load_unit("square_torus");
  const auto r = cesaro_siegel_veech(s, 3.0);
  REQUIRE(r.t.size() == 257);
  CHECK(r.t.front() == 0.0);
  CHECK(r.t.back() == doctest::Approx(3.0));
  CHECK(r.n.front() == 2);
  CHECK(r.cesaro.front() == doctest::Approx(2.0));
  CHECK(r.n.back() == lattice_count(std::exp(3.0)));
  // Trapezoid oracle on the same grid.
  double integral = 0.0;
  for (size_t i = 1; i < r.t.size(); ++i) {
    const double f0 = r.n[i - 1] * std::exp(-2 * r.t[i - 1]), f1 = r.n[i] * std::exp(-2 * r.t[i]);
    integral += 0.5 * (f0 + f1) * (r.t[i] - r.t[i - 1]);
  }
  CHECK(r.cesaro.back() == doctest::Approx(integral / 3.0).epsilon(1e-12));
  CHECK(r.c1 <= r.c2);
  CHECK(r.band_half_width == doctest::Approx(0.5 * std::log(r.c2 / r.c1)));
}
