#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/lyapunov.hpp"

using namespace tsdyn;
using tsdyn::test::load_unit;

TEST_CASE("qr_exponents of a hyperbolic matrix power") {
  CocycleMatrix m = CocycleMatrix::identity(2, 1);
  m.absolute = IntMatrix::from_rows({{2, 1}, {1, 1}});
  m.relative = m.absolute;
  const std::vector<CocycleMatrix> word(600, m);
  const auto e = qr_exponents(word, 600.0);
  const double oracle = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  REQUIRE(e.size() == 2);
  CHECK(e[0] == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(e[1] == doctest::Approx(-oracle).epsilon(1e-3));
}

TEST_CASE("cluster_exponents") {
  CHECK(cluster_exponents({1.0, 0.3, -0.3, -1.0}, {0.01, 0.01, 0.01, 0.01}) == std::vector<int>{1, 1, 1, 1});
  CHECK(cluster_exponents({1.0, 0.001, -0.001, -1.0}, {0.01, 0.01, 0.01, 0.01}) == std::vector<int>{1, 2, 1});
}

TEST_CASE("symmetry report flags asymmetric spectra") {
  LyapunovReport r;
  r.exponents = {1.0, 0.3, -0.3, -1.0};
  r.std_errors = {0.01, 0.01, 0.01, 0.01};
  CHECK(spectrum_symmetry_report(r).ok);
  r.exponents = {1.0, 0.5, -0.3, -1.0};
  const auto bad = spectrum_symmetry_report(r);
  CHECK_FALSE(bad.ok);
  CHECK(bad.residuals[1] == doctest::Approx(0.2));
}

TEST_CASE("geodesic spectrum of the square torus is +-1") {
  SpectrumOptions o;
  o.horizon = 2000;
  const auto r = estimate_spectrum(load_unit("square_torus"), o);
  REQUIRE(r.exponents.size() == 2);
  CHECK(r.exponents[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.exponents[1] == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(r.std_errors[0] > 0.0);
  CHECK(r.multiplicities == std::vector<int>{1, 1});
}

TEST_CASE("double pentagon spectrum is symmetric with a tautological top exponent") {
  SpectrumOptions o;
  o.horizon = 5000;
  const auto r = estimate_spectrum(load_unit("double_pentagon"), o);
  REQUIRE(r.exponents.size() == 4);
  CHECK(r.exponents[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.exponents[1] > 0.1);
  CHECK(r.exponents[1] < 0.9);
  CHECK(spectrum_symmetry_report(r).ok);
}

TEST_CASE("walk spectrum normalized by the drift of the SL(2,R) factor") {
  SpectrumOptions o;
  o.driver = Driver::kRandomWalk;
  o.horizon = 20000;
  o.seed = 5;
  const auto r = estimate_spectrum(load_unit("square_torus"), o);
  CHECK(r.exponents[0] == doctest::Approx(r.drift).epsilon(2e-3));
  CHECK(r.normalized[0] == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(r.normalized[1] == doctest::Approx(-1.0).epsilon(2e-3));
}

TEST_CASE("drift of the spherical walk") {
  // The scalar step law is independent of the surface: a 2D vector oracle.
  ConformalOptions co;
  co.walk.n_steps = 2000;
  co.sigma_steps = 200000;
  const auto c = conformal_block_test(load_unit("square_torus"), co);
  SpectrumOptions o;
  o.driver = Driver::kRandomWalk;
  o.horizon = 200000;
  o.seed = 8;
  const auto r = estimate_spectrum(load_unit("square_torus"), o);
  CHECK(std::abs(c.sigma0 - r.drift) < 4 * std::hypot(c.sigma0_std_error, r.drift_std_error));
}

TEST_CASE("same seed reproduces the estimate exactly") {
  SpectrumOptions o;
  o.driver = Driver::kRandomWalk;
  o.horizon = 3000;
  o.seed = 42;
  const auto s = load_unit("double_pentagon");
  const auto a = estimate_spectrum(s, o);
  const auto b = estimate_spectrum(s, o);
  CHECK(a.exponents == b.exponents);
  CHECK(a.std_errors == b.std_errors);
  o.seed = 43;
  CHECK(estimate_spectrum(s, o).exponents != a.exponents);
}

TEST_CASE("short horizons are refused") {
  SpectrumOptions o;
  o.horizon = 10;
  try {
    estimate_spectrum(load_unit("square_torus"), o);
    FAIL("expected HorizonTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kHorizonTooShort);
  }
}

TEST_CASE("principal angles") {
  const std::vector<std::vector<double>> x = {{1, 0, 0}}, y = {{0, 1, 0}}, xy = {{1, 0, 0}, {0, 1, 0}};
  CHECK(smallest_principal_angle(x, y) == doctest::Approx(std::numbers::pi / 2));
  CHECK(smallest_principal_angle(x, xy) == doctest::Approx(0.0));
  const std::vector<std::vector<double>> d = {{std::cos(0.3), std::sin(0.3), 0}};
  CHECK(smallest_principal_angle(x, d) == doctest::Approx(0.3));
}

TEST_CASE("Oseledets flags are transverse on the double pentagon") {
  FlagOptions o;
  o.walk.n_steps = 1000;
  o.walk.seed = 3;
  const auto f = compute_flags(load_unit("double_pentagon"), o);
  CHECK(f.dimension == 4);
  CHECK(f.block_dims == std::vector<int>{1, 1, 1, 1});
  CHECK(f.transverse);
  CHECK(f.min_angle > 1e-3);
  // Columns are orthonormal.
  for (size_t i = 0; i < f.forward.size(); ++i)
    for (size_t j = 0; j < f.forward.size(); ++j) {
      double d = 0.0;
      for (int k = 0; k < 4; ++k) d += f.forward[i][k] * f.forward[j][k];
      CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("flags do not depend on the frame seed") {
  FlagOptions o;
  o.walk.n_steps = 1000;
  o.walk.seed = 3;
  const auto s = load_unit("double_pentagon");
  const auto a = compute_flags(s, o);
  o.frame_seed = 1234;
  const auto b = compute_flags(s, o);
  for (int d = 1; d < 4; ++d) {
    const std::vector<std::vector<double>> fa(a.forward.begin(), a.forward.begin() + d);
    const std::vector<std::vector<double>> fb(b.forward.begin(), b.forward.begin() + d);
    std::vector<std::vector<double>> perp_b(b.forward.begin() + d, b.forward.end());
    // Vhat_d from one frame is orthogonal to the complement from the other.
    CHECK(smallest_principal_angle(fa, perp_b) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-3));
  }
}

TEST_CASE("short walks cannot separate the flag") {
  FlagOptions o;
  o.walk.n_steps = 10;
  try {
    compute_flags(load_unit("double_pentagon"), o);
    FAIL("expected ClusterOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kClusterOverlap);
  }
}

TEST_CASE("tensor exponents are +-sigma0 + lambda_i") {
  ConformalOptions o;
  o.walk.n_steps = 20000;
  o.sigma_steps = 200000;
  const auto r = conformal_block_test(load_unit("double_pentagon"), o);
  CHECK(r.tensor.size() == 8);
  CHECK(r.predicted.size() == 8);
  CHECK(r.match);
}

TEST_CASE("regularity distances on the non-tautological block") {
  RegularityOptions o;
  o.n_samples = 40;
  o.walk.seed = 11;
  const auto r = regularity_test(load_unit("double_pentagon"), o);
  CHECK(r.block_dim == 2);
  CHECK(r.distances.size() == 40);
  CHECK(r.sigma > 0.0);
  CHECK(r.fraction_above >= 0.95);
  CHECK(r.max_intersection_residual < 1e-6);
  for (double d : r.distances) CHECK(d <= 1.0 + 1e-12);
  CHECK_THROWS_AS(regularity_test(load_unit("square_torus"), o), Error);
}
