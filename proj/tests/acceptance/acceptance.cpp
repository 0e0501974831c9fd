// Acceptance run: one PASS/FAIL line per criterion.
//
//   tsdyn_acceptance [criterion ...]
//
// Exit status counts failures outside kKnownRed; criteria listed there are
// reported as FAIL but do not fail the run (see README, "Known results").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsdyn/billiards.hpp"
#include "tsdyn/counting.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/flow.hpp"
#include "tsdyn/lyapunov.hpp"
#include "tsdyn/norms.hpp"
#include "tsdyn/surface_io.hpp"

using namespace tsdyn;

namespace {

const std::set<int> kKnownRed = {8};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string corpus(const std::string& name) { return std::string(TSDYN_CORPUS_DIR) + "/" + name + ".json"; }

TranslationSurface load(const std::string& name) { return normalize_area(load_surface(corpus(name))); }

const std::vector<std::string> kCorpus = {"square_torus", "hexagonal_torus", "double_pentagon"};

std::string fmt(double v, int prec = 4) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

// Geodesic run on the double pentagon at horizon 1e5, shared by 3 and 4.
const LyapunovReport& pentagon_geodesic() {
  static const LyapunovReport r = [] {
    SpectrumOptions o;
    o.horizon = 1e5;
    o.seed = 1;
    return estimate_spectrum(load("double_pentagon"), o);
  }();
  return r;
}

Verdict structural_exactness() {
  std::vector<TranslationSurface> surfaces;
  for (const auto& n : kCorpus) surfaces.push_back(load(n));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), time(-6.0, 6.0);
  int failures = 0, segments = 0, total_flips = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& s = surfaces[i % surfaces.size()];
    const double theta = angle(rng), t = time(rng);
    MarkedFlow f(s.triangulation());
    f.make_delaunay();
    f.rotate(theta);
    f.rebase();
    f.geodesic(t);
    total_flips += static_cast<int>(f.events().size());
    const CocycleMatrix m = f.rebase();
    const IntMatrix j = standard_symplectic(m.genus);
    if (!is_symplectic(m.absolute, j)) ++failures;
    ++segments;
  }
  return {failures == 0, std::to_string(segments) + " segments, " + std::to_string(failures) + " failures, " +
                             std::to_string(total_flips) + " flips"};
}

Verdict tautological_spectrum() {
  bool pass = true;
  std::string detail;
  for (const auto& n : kCorpus) {
    SpectrumOptions o;
    o.horizon = 1e4;
    const auto r = estimate_spectrum(load(n), o);
    const double top = r.exponents.front(), bottom = r.exponents.back();
    pass = pass && std::abs(top - 1.0) <= 0.02 && std::abs(bottom + 1.0) <= 0.02;
    detail += n + " top " + fmt(top, 5) + " bottom " + fmt(bottom, 5) + "; ";
  }
  return {pass, detail};
}

Verdict spectrum_symmetry() {
  const auto& r = pentagon_geodesic();
  const auto sym = spectrum_symmetry_report(r);
  bool pass = true;
  std::string detail = "exponents";
  for (double e : r.exponents) detail += " " + fmt(e, 5);
  detail += "; residual/threshold";
  for (size_t i = 0; i < sym.residuals.size(); ++i) {
    pass = pass && sym.residuals[i] < sym.thresholds[i];
    detail += " " + fmt(sym.residuals[i], 3) + "/" + fmt(sym.thresholds[i], 3);
  }
  return {pass, detail};
}

Verdict driver_consistency() {
  const auto& g = pentagon_geodesic();
  SpectrumOptions o;
  o.driver = Driver::kRandomWalk;
  o.horizon = 1e5;
  o.seed = 7;
  const auto w = estimate_spectrum(load("double_pentagon"), o);
  const double lg = g.exponents[1], sg = g.std_errors[1];
  const double lw = w.normalized[1], sw = w.normalized_std_errors[1];
  const double diff = std::abs(lg - lw), tol = 3.0 * std::hypot(sg, sw);
  return {diff < tol, "geodesic " + fmt(lg, 5) + " +- " + fmt(sg, 2) + ", walk (drift-normalized) " + fmt(lw, 5) +
                          " +- " + fmt(sw, 2) + ", |diff| " + fmt(diff, 3) + " < " + fmt(tol, 3)};
}

Verdict tensor_spectrum() {
  bool pass = true;
  std::string detail;
  for (const std::string n : {"square_torus", "double_pentagon"}) {
    ConformalOptions o;
    o.walk.n_steps = 100000;
    o.walk.seed = 3;
    o.sigma_steps = 1000000;
    const auto r = conformal_block_test(load(n), o);
    double worst = 0.0;
    for (size_t i = 0; i < r.residuals.size(); ++i) worst = std::max(worst, r.residuals[i] / r.tolerances[i]);
    pass = pass && r.match;
    detail += n + " sigma0 " + fmt(r.sigma0, 4) + ", " + std::to_string(r.tensor.size()) +
              " values, worst residual/tol " + fmt(worst, 3) + "; ";
  }
  return {pass, detail};
}

Verdict lattice_oracle() {
  const auto s = load("square_torus");
  const auto cat = enumerate_cylinders(s, 60.0);
  // Both step functions jump only at sqrt(n), n <= 3600; each is checked just
  // below and just above every jump.
  std::map<int64_t, int64_t> primitive;  // |v|^2 -> number of primitive vectors up to sign
  for (int64_t p = 0; p <= 60; ++p)
    for (int64_t q = -60; q <= 60; ++q) {
      if (p == 0 && q <= 0) continue;
      if (std::gcd(p, std::abs(q)) != 1 || p * p + q * q > 3600) continue;
      ++primitive[p * p + q * q];
    }
  int mismatches = 0, checked = 0;
  int64_t running = 0;
  for (int64_t n = 1; n <= 3600; ++n) {
    const double r = std::sqrt(static_cast<double>(n));
    if (count_N(cat, r * (1 - 1e-12)) != running) ++mismatches;
    if (auto it = primitive.find(n); it != primitive.end()) running += it->second;
    if (count_N(cat, std::min(60.0, r * (1 + 1e-12))) != running) ++mismatches;
    checked += 2;
  }
  if (count_N(cat, 60.0) != running) ++mismatches;
  return {mismatches == 0, std::to_string(checked + 1) + " thresholds, N(60) = " + std::to_string(count_N(cat, 60.0)) +
                               ", " + std::to_string(mismatches) + " mismatches"};
}

std::map<std::string, CountingReport>& counting_reports() {
  static std::map<std::string, CountingReport> reports;
  if (reports.empty())
    for (const auto& n : kCorpus) reports[n] = cesaro_siegel_veech(load(n), 4.0);
  return reports;
}

Verdict masur_bounds() {
  bool pass = true;
  std::string detail;
  for (const auto& [n, r] : counting_reports()) {
    pass = pass && r.band_half_width < 1.0;
    detail += n + " band " + fmt(r.band_half_width, 3) + " (c1 " + fmt(r.c1, 3) + ", c2 " + fmt(r.c2, 3) + "); ";
  }
  return {pass, detail};
}

Verdict weak_asymptotics() {
  const auto& reps = counting_reports();
  const double oracle = std::numbers::pi / (2.0 * std::numbers::pi * std::numbers::pi / 6.0);
  const double torus = reps.at("square_torus").cesaro.back();
  const double rel = std::abs(torus - oracle) / oracle;
  const double drift = reps.at("double_pentagon").last_quarter_drift;
  return {rel < 0.05 && drift < 0.10, "square torus cesaro(4) " + fmt(torus, 5) + " vs pi/(2 zeta(2)) " +
                                          fmt(oracle, 5) + " (off " + fmt(100 * rel, 3) +
                                          "%); double pentagon last-quarter drift " + fmt(100 * drift, 3) + "%"};
}

Verdict contraction_signs() {
  bool pass = true;
  std::string detail;
  for (const auto& n : kCorpus) {
    ContractionOptions o;
    o.theta = 1.0;
    const auto r = contraction_report(load(n), 200.0, o);
    double worst_minus = -INFINITY, worst_plus = INFINITY;
    for (double v : r.minus_slopes) worst_minus = std::max(worst_minus, v);
    for (double v : r.plus_slopes) worst_plus = std::min(worst_plus, v);
    pass = pass && worst_minus < 0.0 && worst_plus > 0.0;
    detail += n + " max W- slope " + fmt(worst_minus, 3) + ", min W+ slope " + fmt(worst_plus, 3) + " (thick " +
              fmt(r.thick_fraction, 3) + "); ";
  }
  return {pass, detail};
}

Verdict zero_one_regularity() {
  const auto s = load("double_pentagon");
  RegularityOptions o;
  o.walk.seed = 11;
  const auto a = regularity_test(s, o);
  o.walk.seed = 12;
  const auto b = regularity_test(s, o);
  const double ratio = std::max(a.sigma, b.sigma) / std::min(a.sigma, b.sigma);
  const auto cross = [](const RegularityReport& r, double sigma) {
    return static_cast<double>(std::count_if(r.distances.begin(), r.distances.end(), [&](double d) { return d > sigma; })) /
           static_cast<double>(r.distances.size());
  };
  const bool pass = a.fraction_above >= 0.95 && b.fraction_above >= 0.95 && a.sigma > 0.0 && b.sigma > 0.0 &&
                    ratio <= 2.0;
  return {pass, "block dim " + std::to_string(a.block_dim) + ", P(d > sigma) " + fmt(a.fraction_above, 3) + " / " +
                    fmt(b.fraction_above, 3) + ", sigma " + fmt(a.sigma, 3) + " / " + fmt(b.sigma, 3) + " (ratio " +
                    fmt(ratio, 3) + "), cross-seed P " + fmt(cross(b, a.sigma), 3) + " / " + fmt(cross(a, b.sigma), 3)};
}

// V - E + F of the polygon complex, vertices by union-find over glued corners.
int euler_characteristic_oracle(const TranslationSurface& s) {
  const auto& polys = s.polygons();
  std::vector<int> offset(polys.size() + 1, 0);
  for (size_t i = 0; i < polys.size(); ++i) offset[i + 1] = offset[i] + static_cast<int>(polys[i].size());
  std::vector<int> parent(offset.back());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const Gluing& g : s.gluings()) {
    const int na = static_cast<int>(polys[g.a.polygon].size()), nb = static_cast<int>(polys[g.b.polygon].size());
    const int a0 = offset[g.a.polygon] + g.a.side, a1 = offset[g.a.polygon] + (g.a.side + 1) % na;
    const int b0 = offset[g.b.polygon] + g.b.side, b1 = offset[g.b.polygon] + (g.b.side + 1) % nb;
    parent[find(a0)] = find(b1);
    parent[find(a1)] = find(b0);
  }
  std::set<int> roots;
  for (int i = 0; i < offset.back(); ++i) roots.insert(find(i));
  const int v = static_cast<int>(roots.size());
  const int e = offset.back() / 2;
  const int f = static_cast<int>(polys.size());
  return v - e + f;
}

Verdict unfolding_genus() {
  bool pass = true;
  std::string detail;
  const std::vector<std::tuple<std::string, int, std::string>> cases = {{"1/3,1/3,1/3", 1, "H(0)"},
                                                                         {"1/5,1/5,3/5", 2, "H(2)"}};
  for (const auto& [angles, genus, stratum] : cases) {
    std::vector<Rational> rs;
    std::stringstream ss(angles);
    std::string tok;
    while (std::getline(ss, tok, ',')) rs.push_back(parse_rational(tok));
    const auto u = unfold(rational_polygon(rs));
    const int chi = euler_characteristic_oracle(u.surface);
    const int oracle_genus = (2 - chi) / 2;
    pass = pass && chi % 2 == 0 && oracle_genus == genus && u.surface.genus() == genus &&
           u.surface.stratum_label() == stratum;
    detail += angles + ": chi " + std::to_string(chi) + ", genus " + std::to_string(u.surface.genus()) + ", " +
              u.surface.stratum_label() + "; ";
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "structural exactness", structural_exactness},
      {2, "tautological spectrum", tautological_spectrum},
      {3, "spectrum symmetry", spectrum_symmetry},
      {4, "driver consistency", driver_consistency},
      {5, "tensor spectrum", tensor_spectrum},
      {6, "lattice-count oracle", lattice_oracle},
      {7, "Masur bounds", masur_bounds},
      {8, "weak asymptotic formula", weak_asymptotics},
      {9, "contraction signs", contraction_signs},
      {10, "zero-one regularity", zero_one_regularity},
      {11, "unfolding genus", unfolding_genus},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int passed = 0, ran = 0, unexpected = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++ran;
    if (v.pass)
      ++passed;
    else if (!kKnownRed.count(c.id))
      ++unexpected;
    std::printf("[%s] %2d %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass", passed, ran);
  if (passed < ran) std::printf(" (%d unexpected failures)", unexpected);
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
