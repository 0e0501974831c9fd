#include "tsdyn/tsdyn.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tsdyn/billiards.hpp"
#include "tsdyn/counting.hpp"
#include "tsdyn/errors.hpp"
#include "tsdyn/flow.hpp"
#include "tsdyn/lyapunov.hpp"
#include "tsdyn/norms.hpp"
#include "tsdyn/surface.hpp"
#include "tsdyn/surface_io.hpp"

using nlohmann::json;

struct tsdyn_surface {
  tsdyn::TranslationSurface s;
};

struct tsdyn_cocycle {
  tsdyn::CocycleMatrix m;
};

struct tsdyn_catalog {
  tsdyn::CylinderCatalog c;
};

namespace {

thread_local std::string g_last_error;

tsdyn_status fail(tsdyn_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
tsdyn_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return TSDYN_OK;
  } catch (const tsdyn::Error& e) {
    return fail(static_cast<tsdyn_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSDYN_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSDYN_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw tsdyn::Error(tsdyn::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

json check(const std::string& name, bool pass, const std::string& detail) {
  return {{"name", name}, {"pass", pass}, {"detail", detail}};
}

json matrix_json(const tsdyn::IntMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

json columns_json(const std::vector<std::vector<double>>& cols) {
  json out = json::array();
  for (const auto& c : cols) out.push_back(c);
  return out;
}

}  // namespace

extern "C" {

const char* tsdyn_version(void) { return "0.1.0"; }

const char* tsdyn_status_name(tsdyn_status status) {
  if (status == TSDYN_OK) return "Ok";
  return tsdyn::error_code_name(static_cast<tsdyn::ErrorCode>(status));
}

const char* tsdyn_last_error(void) { return g_last_error.c_str(); }

void tsdyn_string_free(char* s) { std::free(s); }

tsdyn_status tsdyn_surface_load(const char* path, tsdyn_surface** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new tsdyn_surface{tsdyn::load_surface(path)};
  });
}

tsdyn_status tsdyn_surface_from_json(const char* text, tsdyn_surface** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw tsdyn::Error(tsdyn::ErrorCode::kInvalidArgument, e.what());
    }
    *out = new tsdyn_surface{tsdyn::surface_from_json(j)};
  });
}

tsdyn_status tsdyn_surface_unfold(const char* angles, const double* lengths, size_t n_lengths, tsdyn_surface** out) {
  return guarded([&] {
    require(angles, "angles");
    require(out, "out");
    std::vector<tsdyn::Rational> rs;
    std::stringstream ss(angles);
    std::string tok;
    while (std::getline(ss, tok, ',')) rs.push_back(tsdyn::parse_rational(tok));
    std::vector<double> ls;
    if (lengths) ls.assign(lengths, lengths + n_lengths);
    auto res = tsdyn::unfold(tsdyn::rational_polygon(rs, ls));
    res.surface.set_label(std::string("unfolding(") + angles + ")");
    *out = new tsdyn_surface{std::move(res.surface)};
  });
}

void tsdyn_surface_free(tsdyn_surface* s) { delete s; }

tsdyn_status tsdyn_surface_to_json(const tsdyn_surface* s, char** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = dup_string(tsdyn::surface_to_json(s->s).dump(2));
  });
}

tsdyn_status tsdyn_surface_save(const tsdyn_surface* s, const char* path) {
  return guarded([&] {
    require(s, "surface");
    require(path, "path");
    tsdyn::save_surface(s->s, path);
  });
}

tsdyn_status tsdyn_surface_genus(const tsdyn_surface* s, int* out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = s->s.genus();
  });
}

tsdyn_status tsdyn_surface_homology_rank(const tsdyn_surface* s, int* out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = s->s.homology_rank();
  });
}

tsdyn_status tsdyn_surface_area(const tsdyn_surface* s, double* out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = s->s.area();
  });
}

tsdyn_status tsdyn_surface_stratum(const tsdyn_surface* s, char** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = dup_string(s->s.stratum_label());
  });
}

tsdyn_status tsdyn_surface_validate(const tsdyn_surface* s, char** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    const auto& x = s->s;
    json checks = json::array();
    const int chi = x.euler_characteristic();
    checks.push_back(check("euler_characteristic", chi == 2 - 2 * x.genus(),
                           "V-E+F = " + std::to_string(chi) + ", genus " + std::to_string(x.genus())));
    int order_sum = 0;
    for (int a : x.stratum()) order_sum += a;
    checks.push_back(check("gauss_bonnet", order_sum == 2 * x.genus() - 2,
                           "sum of zero orders " + std::to_string(order_sum) + " for " + x.stratum_label()));
    bool angles_ok = true;
    for (const auto& c : x.cone_points()) angles_ok = angles_ok && c.angle_multiple >= 1;
    checks.push_back(check("cone_angles", angles_ok, std::to_string(x.cone_points().size()) + " cone points"));
    const double a = x.area();
    checks.push_back(check("positive_area", a > 0.0, "area " + std::to_string(a)));
    const auto basis = tsdyn::homology_basis(x);
    const double sa = tsdyn::symplectic_area(x, basis);
    checks.push_back(check("area_agreement", std::abs(sa - a) <= 1e-9 * std::max(1.0, a),
                           "shoelace " + std::to_string(a) + ", symplectic " + std::to_string(sa)));
    const bool std_form = basis.intersection_matrix == tsdyn::standard_symplectic(basis.genus);
    checks.push_back(check("intersection_form", std_form, "absolute rank " + std::to_string(basis.absolute_rank())));
    bool boundaries_ok = true;
    for (int i = 0; i < basis.absolute_rank(); ++i) {
      for (int64_t b : tsdyn::chain_boundary(x.triangulation(), basis.relative_cycles[i])) boundaries_ok &= b == 0;
    }
    checks.push_back(check("absolute_cycles_closed", boundaries_ok, std::to_string(basis.rank()) + " basis cycles"));
    bool pass = true;
    for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
    json j = {{"label", x.label()},
              {"genus", x.genus()},
              {"stratum", x.stratum_label()},
              {"cone_angles_over_2pi", json::array()},
              {"marked_points", x.num_marked_points()},
              {"homology_rank", x.homology_rank()},
              {"area", a},
              {"checks", checks},
              {"pass", pass}};
    for (const auto& c : x.cone_points()) j["cone_angles_over_2pi"].push_back(c.angle_multiple);
    *out = dup_string(j.dump());
  });
}

tsdyn_status tsdyn_surface_normalized(const tsdyn_surface* s, tsdyn_surface** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = new tsdyn_surface{tsdyn::normalize_area(s->s)};
  });
}

void tsdyn_flow_options_init(tsdyn_flow_options* o) {
  if (!o) return;
  o->t = 1.0;
  o->step = tsdyn::FlowOptions{}.step;
  o->theta = 0.0;
}

tsdyn_status tsdyn_flow(const tsdyn_surface* s, const tsdyn_flow_options* o, tsdyn_cocycle** cocycle,
                        tsdyn_surface** end) {
  return guarded([&] {
    require(s, "surface");
    require(o, "options");
    require(cocycle, "cocycle");
    if (!(o->step > 0.0) || !std::isfinite(o->t) || !std::isfinite(o->theta))
      throw tsdyn::Error(tsdyn::ErrorCode::kInvalidArgument, "flow needs finite t, theta and a positive step");
    tsdyn::FlowOptions fo;
    fo.step = o->step;
    tsdyn::MarkedFlow f(s->s.triangulation(), fo);
    f.make_delaunay();
    f.rotate(o->theta);
    f.geodesic(o->t);
    tsdyn::CocycleMatrix m = f.rebase();
    m.elapsed_time = o->t;
    std::unique_ptr<tsdyn_surface> e;
    if (end) e.reset(new tsdyn_surface{tsdyn::TranslationSurface::from_triangulation(f.triangulation(), s->s.label())});
    *cocycle = new tsdyn_cocycle{std::move(m)};
    if (end) *end = e.release();
  });
}

void tsdyn_cocycle_free(tsdyn_cocycle* c) { delete c; }

tsdyn_status tsdyn_cocycle_rank(const tsdyn_cocycle* c, int* relative_rank, int* genus) {
  return guarded([&] {
    require(c, "cocycle");
    if (relative_rank) *relative_rank = c->m.rank();
    if (genus) *genus = c->m.genus;
  });
}

tsdyn_status tsdyn_cocycle_elapsed_time(const tsdyn_cocycle* c, double* out) {
  return guarded([&] {
    require(c, "cocycle");
    require(out, "out");
    *out = c->m.elapsed_time;
  });
}

static tsdyn_status copy_matrix(const tsdyn::IntMatrix& m, int64_t* out, size_t capacity) {
  return guarded([&] {
    require(out, "out");
    if (capacity < m.data().size())
      throw tsdyn::Error(tsdyn::ErrorCode::kDimensionMismatch,
                         "buffer holds " + std::to_string(capacity) + " entries, need " + std::to_string(m.data().size()));
    std::copy(m.data().begin(), m.data().end(), out);
  });
}

tsdyn_status tsdyn_cocycle_relative(const tsdyn_cocycle* c, int64_t* out, size_t capacity) {
  if (!c) return fail(TSDYN_INVALID_ARGUMENT, "cocycle is null");
  return copy_matrix(c->m.relative, out, capacity);
}

tsdyn_status tsdyn_cocycle_absolute(const tsdyn_cocycle* c, int64_t* out, size_t capacity) {
  if (!c) return fail(TSDYN_INVALID_ARGUMENT, "cocycle is null");
  return copy_matrix(c->m.absolute, out, capacity);
}

tsdyn_status tsdyn_cocycle_is_symplectic(const tsdyn_cocycle* c, int* out) {
  return guarded([&] {
    require(c, "cocycle");
    require(out, "out");
    *out = tsdyn::is_symplectic(c->m) ? 1 : 0;
  });
}

tsdyn_status tsdyn_cocycle_compose(const tsdyn_cocycle* first, const tsdyn_cocycle* second, tsdyn_cocycle** out) {
  return guarded([&] {
    require(first, "first");
    require(second, "second");
    require(out, "out");
    if (first->m.rank() != second->m.rank())
      throw tsdyn::Error(tsdyn::ErrorCode::kDimensionMismatch, "cocycles have different ranks");
    *out = new tsdyn_cocycle{first->m.then(second->m)};
  });
}

tsdyn_status tsdyn_cocycle_to_json(const tsdyn_cocycle* c, char** out) {
  return guarded([&] {
    require(c, "cocycle");
    require(out, "out");
    json j = {{"schema", "tsdyn.cocycle/1"},
              {"genus", c->m.genus},
              {"elapsed_time", c->m.elapsed_time},
              {"relative", matrix_json(c->m.relative)},
              {"absolute", matrix_json(c->m.absolute)},
              {"symplectic", tsdyn::is_symplectic(c->m)}};
    *out = dup_string(j.dump());
  });
}

void tsdyn_lyapunov_options_init(tsdyn_lyapunov_options* o) {
  if (!o) return;
  const tsdyn::SpectrumOptions d;
  o->driver = TSDYN_DRIVER_GEODESIC;
  o->horizon = d.horizon;
  o->qr_interval = d.qr_interval;
  o->seed = d.seed;
  o->s_max = d.s_max;
  o->batches = d.batches;
  o->bootstrap_resamples = d.bootstrap_resamples;
  o->min_horizon = d.min_horizon;
  o->flow_step = d.flow.step;
  o->flags = 1;
  o->flag_past_steps = 2000;
  o->flag_future_steps = tsdyn::FlagOptions{}.future_steps;
}

tsdyn_status tsdyn_lyapunov(const tsdyn_surface* s, const tsdyn_lyapunov_options* o, char** report) {
  return guarded([&] {
    require(s, "surface");
    require(o, "options");
    require(report, "report");
    tsdyn::SpectrumOptions so;
    so.driver = o->driver == TSDYN_DRIVER_WALK ? tsdyn::Driver::kRandomWalk : tsdyn::Driver::kGeodesic;
    so.horizon = o->horizon;
    so.qr_interval = o->qr_interval;
    so.seed = o->seed;
    so.s_max = o->s_max;
    so.batches = o->batches;
    so.bootstrap_resamples = o->bootstrap_resamples;
    so.min_horizon = o->min_horizon;
    so.flow.step = o->flow_step;
    const tsdyn::TranslationSurface x = tsdyn::normalize_area(s->s);
    const auto rep = tsdyn::estimate_spectrum(x, so);
    const auto sym = tsdyn::spectrum_symmetry_report(rep);
    json j = {{"driver", tsdyn::driver_name(rep.driver)},
              {"dimension", rep.dimension},
              {"horizon", rep.horizon},
              {"seed", rep.seed},
              {"exponents", rep.exponents},
              {"std_errors", rep.std_errors},
              {"multiplicities", rep.multiplicities}};
    if (rep.driver == tsdyn::Driver::kRandomWalk) {
      j["drift"] = rep.drift;
      j["drift_std_error"] = rep.drift_std_error;
      j["normalized"] = rep.normalized;
      j["normalized_std_errors"] = rep.normalized_std_errors;
    }
    std::vector<bool> flagged(sym.flagged.begin(), sym.flagged.end());
    j["symmetry"] = {{"residuals", sym.residuals},
                     {"thresholds", sym.thresholds},
                     {"flagged", flagged},
                     {"sum", sym.sum},
                     {"sum_threshold", sym.sum_threshold},
                     {"ok", sym.ok}};
    if (o->flags) {
      tsdyn::FlagOptions fo;
      fo.walk.s_max = o->s_max;
      fo.walk.seed = o->seed;
      fo.walk.n_steps = o->flag_past_steps;
      fo.future_steps = o->flag_future_steps;
      fo.batches = o->batches;
      fo.bootstrap_resamples = o->bootstrap_resamples;
      fo.flow.step = o->flow_step;
      try {
        const auto fl = tsdyn::compute_flags(x, fo);
        j["flags"] = {{"past_steps", o->flag_past_steps},
                      {"future_steps", o->flag_future_steps},
                      {"block_dims", fl.block_dims},
                      {"principal_angles", fl.transversality_angles},
                      {"min_angle", fl.min_angle},
                      {"transverse", fl.transverse},
                      {"backward", columns_json(fl.backward)},
                      {"forward", columns_json(fl.forward)}};
      } catch (const tsdyn::Error& e) {
        j["flags"] = {{"error", e.what()}};
      }
    }
    *report = dup_string(j.dump());
  });
}

void tsdyn_count_options_init(tsdyn_count_options* o) {
  if (!o) return;
  const tsdyn::CountingOptions d;
  o->t_max = 4.0;
  o->l_max = std::exp(o->t_max);
  o->grid = d.grid;
  o->fit_from = d.fit_from;
  o->budget = d.enumeration.budget;
  o->workers = 1;
}

tsdyn_status tsdyn_count(const tsdyn_surface* s, const tsdyn_count_options* o, char** report) {
  return guarded([&] {
    require(s, "surface");
    require(o, "options");
    require(report, "report");
    if (!(o->t_max > 0.0) || o->l_max < std::exp(o->t_max) * (1 - 1e-12))
      throw tsdyn::Error(tsdyn::ErrorCode::kInvalidArgument, "need t_max > 0 and l_max >= exp(t_max)");
    tsdyn::CountingOptions co;
    co.grid = o->grid;
    co.fit_from = o->fit_from;
    co.enumeration.budget = o->budget;
    co.enumeration.workers = o->workers;
    const tsdyn::TranslationSurface x = tsdyn::normalize_area(s->s);
    const auto cat = tsdyn::enumerate_cylinders(x, o->l_max, co.enumeration);
    const auto r = tsdyn::counting_report(cat, o->t_max, co);
    json j = {{"t_max", r.t_max},
              {"l_max", r.L},
              {"t", r.t},
              {"N", r.n},
              {"cesaro", r.cesaro},
              {"c1", r.c1},
              {"c2", r.c2},
              {"fit_from", r.fit_from},
              {"band_half_width", r.band_half_width},
              {"last_quarter_drift", r.last_quarter_drift},
              {"cylinders", r.cylinders},
              {"connections", cat.connections.size()}};
    *report = dup_string(j.dump());
  });
}

tsdyn_status tsdyn_catalog_build(const tsdyn_surface* s, double l_max, int workers, tsdyn_catalog** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    tsdyn::EnumerationOptions eo;
    eo.workers = workers;
    *out = new tsdyn_catalog{tsdyn::enumerate_cylinders(s->s, l_max, eo)};
  });
}

void tsdyn_catalog_free(tsdyn_catalog* c) { delete c; }

tsdyn_status tsdyn_catalog_size(const tsdyn_catalog* c, int64_t* cylinders, int64_t* connections) {
  return guarded([&] {
    require(c, "catalog");
    if (cylinders) *cylinders = static_cast<int64_t>(c->c.cylinders.size());
    if (connections) *connections = static_cast<int64_t>(c->c.connections.size());
  });
}

tsdyn_status tsdyn_catalog_count(const tsdyn_catalog* c, double T, int64_t* out) {
  return guarded([&] {
    require(c, "catalog");
    require(out, "out");
    *out = tsdyn::count_N(c->c, T);
  });
}

tsdyn_status tsdyn_catalog_cylinder(const tsdyn_catalog* c, int64_t i, double out[4]) {
  return guarded([&] {
    require(c, "catalog");
    require(out, "out");
    if (i < 0 || i >= static_cast<int64_t>(c->c.cylinders.size()))
      throw tsdyn::Error(tsdyn::ErrorCode::kInvalidArgument, "cylinder index out of range");
    const auto& cy = c->c.cylinders[static_cast<size_t>(i)];
    out[0] = cy.circumference;
    out[1] = cy.height;
    out[2] = cy.holonomy.x;
    out[3] = cy.holonomy.y;
  });
}

void tsdyn_norms_options_init(tsdyn_norms_options* o) {
  if (!o) return;
  const tsdyn::ContractionOptions d;
  o->t_max = 200.0;
  o->theta = 1.0;
  o->sample_interval = d.sample_interval;
  o->thick_systole = d.thick_systole;
  o->min_thick_fraction = d.min_thick_fraction;
  o->flow_step = d.flow.step;
}

tsdyn_status tsdyn_norms(const tsdyn_surface* s, const tsdyn_norms_options* o, char** report) {
  return guarded([&] {
    require(s, "surface");
    require(o, "options");
    require(report, "report");
    tsdyn::ContractionOptions co;
    co.theta = o->theta;
    co.sample_interval = o->sample_interval;
    co.thick_systole = o->thick_systole;
    co.min_thick_fraction = o->min_thick_fraction;
    co.flow.step = o->flow_step;
    const tsdyn::TranslationSurface x = tsdyn::normalize_area(s->s);
    const auto basis = tsdyn::homology_basis(x);
    const auto pn = tsdyn::make_proxy_norm(x, basis);
    const auto r = tsdyn::contraction_report(x, o->t_max, co);
    bool signs = true;
    for (double v : r.minus_slopes) signs = signs && v < 0.0;
    for (double v : r.plus_slopes) signs = signs && v > 0.0;
    json j = {{"t_max", r.t_max},
              {"theta", o->theta},
              {"family_size", pn.family.size()},
              {"family_cutoff", pn.L_norm},
              {"omega_norm", tsdyn::proxy_norm(pn, tsdyn::period_map(x, basis))},
              {"times", r.times},
              {"systole", r.systole},
              {"thick_fraction", r.thick_fraction},
              {"minus_log_norms", r.minus_log_norms},
              {"plus_log_norms", r.plus_log_norms},
              {"minus_slopes", r.minus_slopes},
              {"plus_slopes", r.plus_slopes},
              {"comparability", r.comparability},
              {"signs_ok", signs}};
    *report = dup_string(j.dump());
  });
}

}  // extern "C"
