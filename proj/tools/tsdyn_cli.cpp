// tsdyn command line: validate | unfold | flow | lyapunov | count | norms | run

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsdyn/tsdyn.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitBudget = 3;
constexpr int kExitConfig = 4;

constexpr const char* kReportSchema = "tsdyn.report/1";

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(tsdyn_status st) {
  switch (st) {
    case TSDYN_OK: return kExitOk;
    case TSDYN_NON_MATCHING_EDGE:
    case TSDYN_DISCONNECTED:
    case TSDYN_NEGATIVE_ANGLE_DEFECT:
    case TSDYN_ZERO_AREA:
    case TSDYN_DEGENERATE_POLYGON:
    case TSDYN_NON_SIMPLE_POLYGON:
    case TSDYN_DEGENERATE_TRIANGLE: return kExitInvariant;
    case TSDYN_BUDGET_EXCEEDED:
    case TSDYN_BOUND_EXCEEDED: return kExitBudget;
    case TSDYN_INVALID_ARGUMENT:
    case TSDYN_IRRATIONAL_ANGLE:
    case TSDYN_CONFIG_INVALID:
    case TSDYN_IO: return kExitConfig;
    default: return kExitFailure;
  }
}

void ok(tsdyn_status st, const std::string& context) {
  if (st != TSDYN_OK) throw Failure{exit_code_for(st), context + ": " + tsdyn_last_error()};
}

[[noreturn]] void config_error(const std::string& msg) { throw Failure{kExitConfig, "ConfigInvalid: " + msg}; }

std::string take(char* s) {
  std::string out(s ? s : "");
  tsdyn_string_free(s);
  return out;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "Io: cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitConfig, "Io: cannot write " + path};
  out << text;
}

fs::path corpus_dir() {
  if (const char* env = std::getenv("TSDYN_CORPUS_DIR"); env && *env) return env;
#ifdef TSDYN_DEFAULT_CORPUS
  return TSDYN_DEFAULT_CORPUS;
#else
  return "corpus";
#endif
}

// Plain paths first, then the corpus directory (with or without ".json").
std::string resolve_surface(const std::string& name) {
  if (fs::exists(name)) return name;
  for (const fs::path& p : {corpus_dir() / name, corpus_dir() / (name + ".json")})
    if (fs::exists(p)) return p.string();
  throw Failure{kExitConfig, "Io: surface " + name + " not found (corpus " + corpus_dir().string() + ")"};
}

std::string corpus_version() {
  std::ifstream in(corpus_dir() / "VERSION");
  std::string v;
  if (in && std::getline(in, v)) return v;
  return "unversioned";
}

class Surface {
 public:
  explicit Surface(const std::string& path) {
    resolved_ = resolve_surface(path);
    text_ = read_file(resolved_);
    ok(tsdyn_surface_from_json(text_.c_str(), &h_), resolved_);
  }
  explicit Surface(tsdyn_surface* h) : h_(h) {}
  Surface(const Surface&) = delete;
  Surface& operator=(const Surface&) = delete;
  ~Surface() { tsdyn_surface_free(h_); }

  tsdyn_surface* get() const { return h_; }
  const std::string& text() const { return text_; }

 private:
  tsdyn_surface* h_ = nullptr;
  std::string resolved_;
  std::string text_;
};

// Missing or mistyped keys are ConfigInvalid.
class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) config_error("config must be a JSON object");
  }

  const json& raw() const { return j_; }

  template <class T>
  T get(const std::string& key) const {
    if (!j_.contains(key)) config_error("missing key '" + key + "'");
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      config_error("key '" + key + "' has the wrong type");
    }
  }

  double positive(const std::string& key) const {
    const double v = get<double>(key);
    if (!(v > 0.0) || !std::isfinite(v)) config_error("'" + key + "' must be positive and finite");
    return v;
  }

  std::string output(const std::string& key) const {
    if (!j_.contains("outputs") || !j_["outputs"].contains(key) || j_["outputs"][key].is_null()) return {};
    return j_["outputs"][key].get<std::string>();
  }

 private:
  json j_;
};

struct Outcome {
  json result;
  int exit_code = kExitOk;
  std::string summary;
};

json header(const Config& cfg, const std::string& surface_text, double seconds) {
  std::time_t now = std::time(nullptr);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  json hashed = cfg.raw();
  hashed.erase("outputs");
  json h = {{"tool", "tsdyn"},
            {"version", tsdyn_version()},
            {"config_hash", "fnv1a64:" + hex64(fnv1a(hashed.dump()))},
            {"corpus_version", corpus_version()},
            {"wall_clock_seconds", seconds},
            {"timestamp", ts}};
  if (!surface_text.empty()) h["surface_hash"] = "fnv1a64:" + hex64(fnv1a(surface_text));
  return h;
}

json report(const Config& cfg, const Outcome& out, const std::string& surface_text, double seconds) {
  return {{"schema", kReportSchema},
          {"command", cfg.get<std::string>("command")},
          {"header", header(cfg, surface_text, seconds)},
          {"config", cfg.raw()},
          {"result", out.result}};
}

Outcome do_validate(const Surface& s) {
  char* text = nullptr;
  ok(tsdyn_surface_validate(s.get(), &text), "validate");
  Outcome o;
  o.result = json::parse(take(text));
  o.exit_code = o.result["pass"].get<bool>() ? kExitOk : kExitInvariant;
  std::ostringstream ss;
  ss << o.result["label"].get<std::string>() << ": genus " << o.result["genus"] << ", "
     << o.result["stratum"].get<std::string>() << ", area " << o.result["area"] << '\n';
  for (const auto& c : o.result["checks"])
    ss << "  [" << (c["pass"].get<bool>() ? "pass" : "FAIL") << "] " << c["name"].get<std::string>() << ": "
       << c["detail"].get<std::string>() << '\n';
  o.summary = ss.str();
  return o;
}

Outcome do_unfold(const Config& cfg) {
  const auto angles = cfg.get<std::string>("angles");
  const auto lengths = cfg.get<std::vector<double>>("lengths");
  tsdyn_surface* h = nullptr;
  ok(tsdyn_surface_unfold(angles.c_str(), lengths.empty() ? nullptr : lengths.data(), lengths.size(), &h), "unfold");
  Surface s(h);
  char* text = nullptr;
  ok(tsdyn_surface_to_json(s.get(), &text), "unfold");
  const std::string surface_json = take(text);
  const std::string out = cfg.output("surface");
  if (!out.empty()) write_file(out, surface_json + "\n");
  Outcome o;
  ok(tsdyn_surface_validate(s.get(), &text), "unfold");
  o.result = json::parse(take(text));
  o.result["surface"] = json::parse(surface_json);
  o.exit_code = o.result["pass"].get<bool>() ? kExitOk : kExitInvariant;
  o.summary = "unfolded " + angles + ": genus " + std::to_string(o.result["genus"].get<int>()) + ", " +
              o.result["stratum"].get<std::string>() + (out.empty() ? "" : " -> " + out) + "\n";
  return o;
}

Outcome do_flow(const Config& cfg, const Surface& s) {
  tsdyn_flow_options fo;
  tsdyn_flow_options_init(&fo);
  fo.t = cfg.get<double>("t");
  fo.step = cfg.positive("step");
  fo.theta = cfg.get<double>("theta");
  tsdyn_cocycle* c = nullptr;
  ok(tsdyn_flow(s.get(), &fo, &c, nullptr), "flow");
  char* text = nullptr;
  const tsdyn_status st = tsdyn_cocycle_to_json(c, &text);
  tsdyn_cocycle_free(c);
  ok(st, "flow");
  Outcome o;
  o.result = json::parse(take(text));
  o.exit_code = o.result["symplectic"].get<bool>() ? kExitOk : kExitInvariant;
  if (cfg.get<bool>("norm_trace")) {
    tsdyn_norms_options no;
    tsdyn_norms_options_init(&no);
    no.t_max = fo.t;
    no.theta = fo.theta;
    no.flow_step = fo.step;
    no.min_thick_fraction = 0.0;
    ok(tsdyn_norms(s.get(), &no, &text), "flow norm trace");
    o.result["norm_trace"] = json::parse(take(text));
  }
  std::ostringstream ss;
  ss << "flow t=" << fo.t << ": rank " << o.result["relative"]["rows"] << ", genus " << o.result["genus"]
     << ", symplectic " << (o.result["symplectic"].get<bool>() ? "yes" : "NO") << '\n';
  o.summary = ss.str();
  return o;
}

Outcome do_lyapunov(const Config& cfg, const Surface& s) {
  tsdyn_lyapunov_options lo;
  tsdyn_lyapunov_options_init(&lo);
  const auto driver = cfg.get<std::string>("driver");
  if (driver == "geodesic")
    lo.driver = TSDYN_DRIVER_GEODESIC;
  else if (driver == "walk")
    lo.driver = TSDYN_DRIVER_WALK;
  else
    config_error("driver must be geodesic or walk");
  lo.horizon = cfg.positive("horizon");
  lo.qr_interval = cfg.positive("qr_interval");
  lo.seed = cfg.get<uint64_t>("seed");
  lo.s_max = cfg.positive("s_max");
  lo.batches = cfg.get<int>("batches");
  lo.bootstrap_resamples = cfg.get<int>("bootstrap_resamples");
  lo.min_horizon = cfg.get<double>("min_horizon");
  lo.flow_step = cfg.positive("flow_step");
  lo.flags = cfg.get<bool>("flags") ? 1 : 0;
  lo.flag_past_steps = cfg.get<int64_t>("flag_past_steps");
  lo.flag_future_steps = cfg.get<int64_t>("flag_future_steps");
  char* text = nullptr;
  ok(tsdyn_lyapunov(s.get(), &lo, &text), "lyapunov");
  Outcome o;
  o.result = json::parse(take(text));
  std::ostringstream ss;
  ss << "lyapunov (" << driver << ", horizon " << lo.horizon << ", seed " << lo.seed << ")\n";
  const auto& ex = o.result["exponents"];
  const auto& se = o.result["std_errors"];
  for (size_t i = 0; i < ex.size(); ++i) {
    ss << "  lambda_" << i + 1 << " = " << ex[i].get<double>() << " +- " << se[i].get<double>();
    if (o.result.contains("normalized")) ss << "  (normalized " << o.result["normalized"][i].get<double>() << ")";
    ss << '\n';
  }
  ss << "  symmetry " << (o.result["symmetry"]["ok"].get<bool>() ? "ok" : "FLAGGED") << '\n';
  o.summary = ss.str();
  return o;
}

Outcome do_count(const Config& cfg, const Surface& s, int workers) {
  tsdyn_count_options co;
  tsdyn_count_options_init(&co);
  co.t_max = cfg.positive("t_max");
  co.l_max = cfg.positive("l_max");
  co.grid = cfg.get<int>("grid");
  co.fit_from = cfg.get<double>("fit_from");
  co.budget = cfg.get<int64_t>("budget");
  co.workers = workers;
  char* text = nullptr;
  ok(tsdyn_count(s.get(), &co, &text), "count");
  Outcome o;
  o.result = json::parse(take(text));
  std::ostringstream ss;
  ss << "count: " << o.result["cylinders"] << " cylinders up to L=" << co.l_max << ", c1=" << o.result["c1"]
     << ", c2=" << o.result["c2"] << ", cesaro(t_max)=" << o.result["cesaro"].back() << '\n';
  o.summary = ss.str();
  return o;
}

std::string counting_csv(const json& rep) {
  std::ostringstream ss;
  ss << "# schema: tsdyn.counting/1\n";
  ss << "# command: " << rep["command"].get<std::string>() << "\n";
  ss << "# config_hash: " << rep["header"]["config_hash"].get<std::string>() << "\n";
  ss << "# config: " << rep["config"].dump() << "\n";
  ss << "t,N,cesaro,c1_fit,c2_fit\n";
  const auto& r = rep["result"];
  const double c1 = r["c1"], c2 = r["c2"];
  ss.precision(17);
  for (size_t i = 0; i < r["t"].size(); ++i) {
    const double t = r["t"][i];
    ss << t << ',' << r["N"][i].get<int64_t>() << ',' << r["cesaro"][i].get<double>() << ',' << c1 * std::exp(2 * t)
       << ',' << c2 * std::exp(2 * t) << '\n';
  }
  return ss.str();
}

Outcome do_norms(const Config& cfg, const Surface& s) {
  tsdyn_norms_options no;
  tsdyn_norms_options_init(&no);
  no.t_max = cfg.positive("t_max");
  no.theta = cfg.get<double>("theta");
  no.sample_interval = cfg.positive("sample_interval");
  no.thick_systole = cfg.positive("thick_systole");
  no.min_thick_fraction = cfg.get<double>("min_thick_fraction");
  no.flow_step = cfg.positive("flow_step");
  char* text = nullptr;
  ok(tsdyn_norms(s.get(), &no, &text), "norms");
  Outcome o;
  o.result = json::parse(take(text));
  o.exit_code = o.result["signs_ok"].get<bool>() ? kExitOk : kExitInvariant;
  std::ostringstream ss;
  ss << "norms t_max=" << no.t_max << " theta=" << no.theta << ": W- slopes " << o.result["minus_slopes"].dump()
     << ", W+ slopes " << o.result["plus_slopes"].dump() << ", thick fraction " << o.result["thick_fraction"] << '\n';
  o.summary = ss.str();
  return o;
}

int execute(const Config& cfg, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const auto command = cfg.get<std::string>("command");
  Outcome out;
  std::string surface_text;
  if (command == "unfold") {
    out = do_unfold(cfg);
  } else {
    const Surface s(cfg.get<std::string>("surface"));
    surface_text = s.text();
    if (command == "validate")
      out = do_validate(s);
    else if (command == "flow")
      out = do_flow(cfg, s);
    else if (command == "lyapunov")
      out = do_lyapunov(cfg, s);
    else if (command == "count")
      out = do_count(cfg, s, workers);
    else if (command == "norms")
      out = do_norms(cfg, s);
    else
      config_error("unknown command '" + command + "'");
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json rep = report(cfg, out, surface_text, seconds);

  if (const auto path = cfg.output("report"); !path.empty()) {
    if (command == "count" && fs::path(path).extension() == ".csv")
      write_file(path, counting_csv(rep));
    else
      write_file(path, rep.dump(2) + "\n");
  }
  if (const auto path = cfg.output("summary"); !path.empty()) write_file(path, rep.dump(2) + "\n");
  if (const auto path = cfg.output("cocycle"); !path.empty()) {
    json c = out.result;
    c.erase("norm_trace");
    c["header"] = rep["header"];
    c["config"] = rep["config"];
    write_file(path, c.dump(2) + "\n");
  }
  std::cout << out.summary;
  return out.exit_code;
}

json outputs(std::initializer_list<std::pair<const char*, std::string>> kv) {
  json o = json::object();
  for (const auto& [k, v] : kv) o[k] = v.empty() ? json(nullptr) : json(v);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsdyn: translation surfaces, Teichmueller flow, Lyapunov spectra and cylinder counting"};
  app.require_subcommand(1);
  int workers = 1;
  app.add_option("--workers", workers, "Worker threads for saddle connection enumeration")->check(CLI::PositiveNumber);

  json cfg;

  auto* validate = app.add_subcommand("validate", "Check the invariants of a surface file");
  std::string v_surface, v_report;
  validate->add_option("surface,--surface", v_surface, "Surface JSON (path or corpus name)")->required();
  validate->add_option("--report", v_report, "Write the JSON report here");
  validate->callback([&] {
    cfg = {{"command", "validate"}, {"surface", v_surface}, {"outputs", outputs({{"report", v_report}})}};
  });

  auto* unfold = app.add_subcommand("unfold", "Unfold a rational billiard table");
  std::string u_angles, u_out, u_report;
  std::vector<double> u_lengths;
  unfold->add_option("--angles", u_angles, "Interior angles over pi, e.g. 1/5,1/5,3/5")->required();
  unfold->add_option("--lengths", u_lengths, "Side lengths (default: law of sines, first side 1)")->delimiter(',');
  unfold->add_option("--out", u_out, "Write the surface JSON here");
  unfold->add_option("--report", u_report, "Write the JSON report here");
  unfold->callback([&] {
    cfg = {{"command", "unfold"},
           {"angles", u_angles},
           {"lengths", u_lengths},
           {"outputs", outputs({{"surface", u_out}, {"report", u_report}})}};
  });

  auto* flow = app.add_subcommand("flow", "Flow along the Teichmueller geodesic and emit the cocycle");
  std::string f_surface, f_cocycle, f_report;
  double f_t = 1.0, f_step = 0.02, f_theta = 0.0;
  bool f_trace = false;
  flow->add_option("--surface", f_surface, "Surface JSON (path or corpus name)")->required();
  flow->add_option("--t", f_t, "Teichmueller time (negative allowed)")->required();
  flow->add_option("--step", f_step, "Largest substep between Delaunay restorations")->capture_default_str();
  flow->add_option("--theta", f_theta, "Rotation applied before flowing")->capture_default_str();
  flow->add_option("--emit-cocycle", f_cocycle, "Write the cocycle JSON here");
  flow->add_option("--report", f_report, "Write the JSON report here");
  flow->add_flag("--norm-trace", f_trace, "Add proxy-norm traces along the segment");
  flow->callback([&] {
    cfg = {{"command", "flow"},    {"surface", f_surface},  {"t", f_t},
           {"step", f_step},       {"theta", f_theta},      {"norm_trace", f_trace},
           {"outputs", outputs({{"cocycle", f_cocycle}, {"report", f_report}})}};
  });

  auto* lyap = app.add_subcommand("lyapunov", "Estimate the Lyapunov spectrum of the KZ cocycle");
  tsdyn_lyapunov_options lo;
  tsdyn_lyapunov_options_init(&lo);
  std::string l_surface, l_driver = "geodesic", l_report;
  bool l_no_flags = false;
  lyap->add_option("--surface", l_surface, "Surface JSON (path or corpus name)")->required();
  lyap->add_option("--driver", l_driver, "geodesic or walk")
      ->check(CLI::IsMember({"geodesic", "walk"}))
      ->capture_default_str();
  lyap->add_option("--horizon", lo.horizon, "Teichmueller time or number of walk steps")->capture_default_str();
  lyap->add_option("--seed", lo.seed, "Random seed")->capture_default_str();
  lyap->add_option("--qr-interval", lo.qr_interval, "Time between QR steps (geodesic)")->capture_default_str();
  lyap->add_option("--s-max", lo.s_max, "Walk step law: s uniform on [0, s_max]")->capture_default_str();
  lyap->add_option("--batches", lo.batches, "Batches for the standard errors")->capture_default_str();
  lyap->add_option("--bootstrap", lo.bootstrap_resamples, "Bootstrap resamples")->capture_default_str();
  lyap->add_option("--min-horizon", lo.min_horizon, "Refuse shorter horizons")->capture_default_str();
  lyap->add_option("--flow-step", lo.flow_step, "Flow substep")->capture_default_str();
  lyap->add_flag("--no-flags", l_no_flags, "Skip the Oseledets flags");
  lyap->add_option("--flag-past-steps", lo.flag_past_steps, "Walk steps before the flag base point")
      ->capture_default_str();
  lyap->add_option("--flag-future-steps", lo.flag_future_steps, "Walk steps after it")->capture_default_str();
  lyap->add_option("--report", l_report, "Write the JSON report here");
  lyap->callback([&] {
    cfg = {{"command", "lyapunov"},
           {"surface", l_surface},
           {"driver", l_driver},
           {"horizon", lo.horizon},
           {"seed", lo.seed},
           {"qr_interval", lo.qr_interval},
           {"s_max", lo.s_max},
           {"batches", lo.batches},
           {"bootstrap_resamples", lo.bootstrap_resamples},
           {"min_horizon", lo.min_horizon},
           {"flow_step", lo.flow_step},
           {"flags", !l_no_flags},
           {"flag_past_steps", lo.flag_past_steps},
           {"flag_future_steps", lo.flag_future_steps},
           {"outputs", outputs({{"report", l_report}})}};
  });

  auto* count = app.add_subcommand("count", "Count cylinders and the Cesaro average of N(e^t) e^{-2t}");
  tsdyn_count_options co;
  tsdyn_count_options_init(&co);
  std::string c_surface, c_report, c_summary;
  double c_lmax = 0.0;
  count->add_option("--surface", c_surface, "Surface JSON (path or corpus name)")->required();
  count->add_option("--tmax", co.t_max, "Largest t of the grid")->capture_default_str();
  count->add_option("--Lmax", c_lmax, "Enumeration cutoff (default e^tmax)");
  count->add_option("--grid", co.grid, "Grid points on [0, tmax]")->capture_default_str();
  count->add_option("--fit-from", co.fit_from, "Band fitted over t >= this")->capture_default_str();
  count->add_option("--budget", co.budget, "Cap on developed triangles")->capture_default_str();
  count->add_option("--report", c_report, "Write the counting grid here (.csv, or JSON otherwise)");
  count->add_option("--summary", c_summary, "Write the JSON report here");
  count->callback([&] {
    cfg = {{"command", "count"},
           {"surface", c_surface},
           {"t_max", co.t_max},
           {"l_max", c_lmax > 0.0 ? c_lmax : std::exp(co.t_max)},
           {"grid", co.grid},
           {"fit_from", co.fit_from},
           {"budget", co.budget},
           {"outputs", outputs({{"report", c_report}, {"summary", c_summary}})}};
  });

  auto* norms = app.add_subcommand("norms", "Proxy AGY norm contraction along a geodesic");
  tsdyn_norms_options no;
  tsdyn_norms_options_init(&no);
  std::string n_surface, n_report;
  norms->add_option("--surface", n_surface, "Surface JSON (path or corpus name)")->required();
  norms->add_option("--tmax", no.t_max, "Length of the geodesic segment")->capture_default_str();
  norms->add_option("--theta", no.theta, "Rotation selecting the geodesic")->capture_default_str();
  norms->add_option("--sample-interval", no.sample_interval, "Time between samples")->capture_default_str();
  norms->add_option("--thick-systole", no.thick_systole, "Systole defining the thick part")->capture_default_str();
  norms->add_option("--min-thick-fraction", no.min_thick_fraction, "Required time in the thick part")
      ->capture_default_str();
  norms->add_option("--flow-step", no.flow_step, "Flow substep")->capture_default_str();
  norms->add_option("--report", n_report, "Write the JSON report here");
  norms->callback([&] {
    cfg = {{"command", "norms"},
           {"surface", n_surface},
           {"t_max", no.t_max},
           {"theta", no.theta},
           {"sample_interval", no.sample_interval},
           {"thick_systole", no.thick_systole},
           {"min_thick_fraction", no.min_thick_fraction},
           {"flow_step", no.flow_step},
           {"outputs", outputs({{"report", n_report}})}};
  });

  auto* run = app.add_subcommand("run", "Re-run from a config file or the config embedded in a report");
  std::string r_config;
  run->add_option("--config", r_config, "Config JSON or report JSON")->required();
  run->callback([&] { cfg = nullptr; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      json j;
      try {
        j = json::parse(read_file(r_config));
      } catch (const json::exception& e) {
        config_error(e.what());
      }
      if (j.contains("config")) j = j["config"];
      return execute(Config(j), workers);
    }
    return execute(Config(cfg), workers);
  } catch (const Failure& f) {
    std::cerr << "tsdyn: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "tsdyn: " << e.what() << '\n';
    return kExitFailure;
  }
}
