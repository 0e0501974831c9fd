#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/flow.hpp"

using namespace tsdyn;
using tsdyn::test::load_unit;

namespace {

double max_diff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).norm());
  return m;
}

}  // namespace

TEST_CASE("apply_sl2 requires determinant one") {
  const auto s = load_unit("square_torus");
  CHECK_THROWS_AS(apply_sl2(s, Mat2{2, 0, 0, 1}), Error);
  const auto t = apply_sl2(s, Mat2::unipotent(0.3));
  CHECK(t.area() == doctest::Approx(1.0));
}

TEST_CASE("cocycles are exactly symplectic") {
  for (const auto& n : test::corpus_names()) {
    const auto s = apply_sl2(load_unit(n), Mat2::rotation(0.3));
    for (double t : {0.5, 3.0, -4.0}) {
      const auto r = flow_segment(s, t);
      CHECK(is_symplectic(r.cocycle));
      CHECK(r.cocycle.absolute.rows() == 2 * s.genus());
      CHECK(r.surface.area() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("end periods are the transported start periods with the geodesic twist") {
  for (const auto& n : test::corpus_names()) {
    CAPTURE(n);
    const auto s = apply_sl2(load_unit(n), Mat2::rotation(0.7));
    const auto b0 = homology_basis(s);
    const auto p0 = period_map(s, b0);
    const auto r = flow_segment(s, 5.0);
    CHECK_FALSE(r.events.empty());
    const auto p1 = period_map(r.surface, homology_basis(r.surface));
    const auto pred = gauss_manin_transport(p0, r.cocycle, Twist::kDerivative);
    CHECK(max_diff(p1, pred) < 1e-8);
  }
}

TEST_CASE("splitting a segment composes to the unsplit cocycle") {
  const auto s = apply_sl2(load_unit("double_pentagon"), Mat2::rotation(1.1));
  const auto whole = flow_segment(s, 4.0);
  const auto a = flow_segment(s, 1.5);
  const auto b = flow_segment(a.surface, 2.5);
  const auto composed = a.cocycle.then(b.cocycle);
  CHECK(composed.relative == whole.cocycle.relative);
  CHECK(composed.absolute == whole.cocycle.absolute);
}

TEST_CASE("forward then backward returns to the start periods") {
  const auto s = apply_sl2(load_unit("double_pentagon"), Mat2::rotation(0.2));
  const auto p0 = period_map(s, homology_basis(s));
  const auto f = flow_segment(s, 20.0);
  const auto g = flow_segment(f.surface, -20.0);
  const auto total = f.cocycle.then(g.cocycle);
  const auto p2 = period_map(g.surface, homology_basis(g.surface));
  CHECK(max_diff(p2, gauss_manin_transport(p0, total)) < 1e-10);
}

TEST_CASE("cocycle inverse") {
  const auto r = flow_segment(apply_sl2(load_unit("hexagonal_torus"), Mat2::rotation(0.5)), 6.0);
  const auto id = r.cocycle.then(r.cocycle.inverse());
  CHECK(id.relative == IntMatrix::identity(r.cocycle.rank()));
  CHECK(id.absolute == IntMatrix::identity(2));
}

TEST_CASE("square torus: cocycle equals the lattice change of basis") {
  // End periods are g_t applied to M times the start periods.
  const auto s = apply_sl2(load_unit("square_torus"), Mat2::rotation(0.9));
  const auto r = flow_segment(s, 3.0);
  const auto& m = r.cocycle.absolute;
  CHECK(std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) == 1);
  const auto p0 = period_map(s, homology_basis(s));
  const auto p1 = period_map(r.surface, homology_basis(r.surface));
  const Mat2 g = Mat2::geodesic(3.0);
  for (int i = 0; i < 2; ++i) {
    const Vec2 v = g * (p0[0] * static_cast<double>(m(i, 0)) + p0[1] * static_cast<double>(m(i, 1)));
    CHECK((v - p1[i]).norm() < 1e-9);
  }
}

TEST_CASE("Delaunay restoration after every substep") {
  const auto s = apply_sl2(load_unit("double_pentagon"), Mat2::rotation(0.4));
  MarkedFlow f(s.triangulation());
  f.make_delaunay();
  for (int i = 0; i < 10; ++i) {
    f.geodesic(0.5);
    CHECK(f.triangulation().is_delaunay());
  }
  CHECK(f.time() == doctest::Approx(5.0));
}

TEST_CASE("splitting subspaces") {
  for (const auto& n : test::corpus_names()) {
    CAPTURE(n);
    const auto s = load_unit(n);
    const auto b = homology_basis(s);
    const auto sp = splitting_subspaces(s, b);
    CHECK(sp.h1_perp.size() == static_cast<size_t>(b.rank() - 2));
    CHECK(sp.area == doctest::Approx(1.0));
    const auto back = sp.pi_minus(sp.im_x);
    for (int i = 0; i < sp.rank; ++i) CHECK(back[i] == doctest::Approx(sp.re_x[i]).epsilon(1e-9));
    for (const auto& u : sp.h1_perp) {
      CHECK(std::abs(wedge(b, sp.re_x, u)) < 1e-9);
      CHECK(std::abs(wedge(b, sp.im_x, u)) < 1e-9);
    }
    CHECK(sp.w_plus.size() == sp.h1_perp.size() + 1);
    CHECK(sp.w_minus.size() == sp.h1_perp.size() + 1);
  }
}

TEST_CASE("transport twists") {
  CocycleMatrix id = CocycleMatrix::identity(2, 1);
  id.elapsed_time = 1.0;
  const std::vector<double> v = {1.0, 2.0};
  const auto up = gauss_manin_transport(v, id, Twist::kUnstable);
  CHECK(up[1] == doctest::Approx(2.0 * std::exp(1.0)));
  const auto down = gauss_manin_transport(v, id, Twist::kStable);
  CHECK(down[0] == doctest::Approx(std::exp(-1.0)));
  const std::vector<Vec2> w = {{1.0, 1.0}};
  CocycleMatrix one = CocycleMatrix::identity(1, 0);
  one.elapsed_time = 2.0;
  const auto d = gauss_manin_transport(w, one, Twist::kDerivative);
  CHECK(d[0].x == doctest::Approx(std::exp(2.0)));
  CHECK(d[0].y == doctest::Approx(std::exp(-2.0)));
}
