#include "tsdyn/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

class Budget {
 public:
  explicit Budget(int64_t limit) : limit_(limit) {}
  void charge() {
    if (used_.fetch_add(1, std::memory_order_relaxed) >= limit_)
      throw Error(ErrorCode::kBudgetExceeded, "developed more than " + std::to_string(limit_) + " triangles");
  }

 private:
  int64_t limit_;
  std::atomic<int64_t> used_{0};
};

std::vector<double> all_offsets(const FlatTriangulation& tri) {
  std::vector<double> off(tri.num_half_edges());
  for (int v = 0; v < tri.num_vertices(); ++v) {
    const int ref = tri.reference_half_edge(v);
    double total = 0.0;
    int x = ref;
    do {
      off[x] = total;
      total += tri.corner_angle(x);
      x = tri.rotate_ccw(x);
    } while (x != ref);
  }
  return off;
}

// Unfolds triangles across the window of a corner, visiting every vertex
// that is visible from the corner's apex through the open angular window
// (lo, hi) and lies within the radius.
class Developer {
 public:
  Developer(const FlatTriangulation& tri, double eps, bool track, Budget& budget)
      : tri_(tri), eps_(eps), track_(track), budget_(budget) {}

  template <class Prune, class Visit>
  void sector(int h, Vec2 lo, Vec2 hi, double radius, Prune&& prune, Visit&& visit) {
    stack_.clear();
    int pa = -1, pb = -1;
    if (track_) {
      pa = add_vertex(h, -1);
      pb = add_vertex(FlatTriangulation::twin(tri_.prev(h)), -1);
    }
    stack_.push_back({tri_.vec(h), -tri_.vec(tri_.prev(h)), lo, hi, tri_.next(h), pa, pb, -1});
    while (!stack_.empty()) {
      const Frame f = stack_.back();
      stack_.pop_back();
      if (origin_segment_distance(f.p, f.q) > radius || prune(f.p, f.q)) continue;
      budget_.charge();
      const int node = track_ ? add_node(f.x, f.node) : -1;
      const int t = FlatTriangulation::twin(f.x);
      const int n = tri_.next(t);
      const Vec2 x = f.p + tri_.vec(n);
      const double nx = x.norm();
      const bool past_lo = cross(f.lo, x) > eps_ * f.lo.norm() * nx;
      const bool before_hi = cross(x, f.hi) > eps_ * nx * f.hi.norm();
      const int xv = track_ ? add_vertex(n, f.pv) : -1;
      if (past_lo && before_hi && nx <= radius) visit(x, tri_.prev(t), xv, node);
      const Vec2 lo2 = past_lo ? x : f.lo;
      if (open(lo2, f.hi)) stack_.push_back({x, f.q, lo2, f.hi, tri_.prev(t), xv, f.qv, node});
      const Vec2 hi1 = before_hi ? x : f.hi;
      if (open(f.lo, hi1)) stack_.push_back({f.p, x, f.lo, hi1, n, f.pv, xv, node});
    }
  }

  std::vector<int> chart_path(int vnode) const {
    std::vector<int> out;
    for (int v = vnode; v >= 0; v = vertices_[v].parent) out.push_back(vertices_[v].half_edge);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<int> crossings(int node) const {
    std::vector<int> out;
    for (int v = node; v >= 0; v = nodes_[v].parent) out.push_back(FlatTriangulation::edge_of(nodes_[v].half_edge));
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  // Windows thinner than the strict-test tolerance cannot contain a vertex.
  bool open(Vec2 lo, Vec2 hi) const { return cross(lo, hi) > eps_ * lo.norm() * hi.norm(); }

  struct Frame {
    Vec2 p, q, lo, hi;
    int x;       // half-edge from p to q, in the face already developed
    int pv, qv;  // path records of p and q
    int node;
  };
  struct Link {
    int half_edge;
    int parent;
  };

  int add_vertex(int h, int parent) {
    vertices_.push_back({h, parent});
    return static_cast<int>(vertices_.size()) - 1;
  }
  int add_node(int h, int parent) {
    nodes_.push_back({h, parent});
    return static_cast<int>(nodes_.size()) - 1;
  }

  const FlatTriangulation& tri_;
  double eps_;
  bool track_;
  Budget& budget_;
  std::vector<Frame> stack_;
  std::vector<Link> vertices_, nodes_;
};

void fill_path(SaddleConnection& c, std::vector<int> path, std::vector<int> crossings, int num_edges) {
  c.chain.assign(num_edges, 0);
  for (int h : path) c.chain[FlatTriangulation::edge_of(h)] += FlatTriangulation::sign_of(h);
  c.chart_path = std::move(path);
  c.crossings = std::move(crossings);
}

// Connections starting along half-edge h or inside the corner at h.
std::vector<SaddleConnection> corner_connections(const FlatTriangulation& tri, const std::vector<double>& off, int h,
                                                 double L, const EnumerationOptions& opts, Budget& budget) {
  std::vector<SaddleConnection> out;
  const int v = tri.origin(h);
  if (tri.vec(h).norm() <= L) {
    SaddleConnection c;
    c.holonomy = tri.vec(h);
    c.start_vertex = v;
    c.end_vertex = tri.origin(FlatTriangulation::twin(h));
    c.start_angle = off[h];
    c.end_angle = off[FlatTriangulation::twin(h)];
    c.start_half_edge = h;
    if (opts.track_paths) fill_path(c, {h}, {}, tri.num_edges());
    out.push_back(std::move(c));
  }
  Developer dev(tri, opts.window_eps, opts.track_paths, budget);
  const Vec2 a = tri.vec(h), b = -tri.vec(tri.prev(h));
  dev.sector(
      h, a, b, L, [](Vec2, Vec2) { return false; },
      [&](Vec2 x, int end_h, int xv, int node) {
        SaddleConnection c;
        c.holonomy = x;
        c.start_vertex = v;
        c.end_vertex = tri.origin(end_h);
        c.start_angle = off[h] + angle_between(a, x);
        c.end_angle = off[end_h] + angle_between(tri.vec(end_h), -x);
        c.start_half_edge = h;
        if (opts.track_paths) fill_path(c, dev.chart_path(xv), dev.crossings(node), tri.num_edges());
        out.push_back(std::move(c));
      });
  return out;
}

bool upper_direction(Vec2 v) {
  const double a = std::atan2(v.y, v.x);
  return a >= -1e-9 && a < std::numbers::pi - 1e-9;
}

// Smallest positive perpendicular offset, relative to the unit direction u,
// of a vertex seen from vertex v inside the cumulative angle interval
// (alpha, alpha + pi), searching only the strip of width max_height.
double strip_height(const FlatTriangulation& tri, const std::vector<double>& off, int v, double alpha, Vec2 u,
                    double radius, double max_height, const EnumerationOptions& opts, Budget& budget) {
  const double theta = tri.cone_angle(v);
  const double beta = alpha + std::numbers::pi;
  const double floor = 1e-9 * radius;
  double best = INFINITY;
  auto consider = [&](Vec2 x) {
    const double p = cross(u, x);
    if (p > floor) best = std::min(best, p);
  };
  auto prune = [&](Vec2 p, Vec2 q) { return std::min(cross(u, p), cross(u, q)) > std::min(best, max_height); };
  Developer dev(tri, opts.window_eps, false, budget);
  const int ref = tri.reference_half_edge(v);
  int h = ref;
  do {
    const double o = off[h], c = tri.corner_angle(h);
    const Vec2 dir = tri.vec(h) * (1.0 / tri.vec(h).norm());
    for (double shift : {-theta, 0.0, theta}) {
      const double a = alpha + shift, b = beta + shift;
      if (o > a && o < b && tri.vec(h).norm() <= radius) consider(tri.vec(h));
      const double lo = std::max(a, o), hi = std::min(b, o + c);
      if (hi - lo <= 0.0) continue;
      const Vec2 vlo = Mat2::rotation(lo - o) * dir, vhi = Mat2::rotation(hi - o) * dir;
      dev.sector(h, vlo, vhi, radius, prune, [&](Vec2 x, int, int, int) { consider(x); });
    }
    h = tri.rotate_ccw(h);
  } while (h != ref);
  return best;
}

}  // namespace

std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& s, double L,
                                                           const EnumerationOptions& opts) {
  if (!(L > 0.0)) throw Error(ErrorCode::kInvalidArgument, "length bound must be positive");
  if (opts.workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be positive");
  const FlatTriangulation& tri = s.triangulation();
  const std::vector<double> off = all_offsets(tri);
  Budget budget(opts.budget);
  const int nh = tri.num_half_edges();
  std::vector<std::vector<SaddleConnection>> parts(nh);
  if (opts.workers == 1) {
    for (int h = 0; h < nh; ++h) parts[h] = corner_connections(tri, off, h, L, opts, budget);
  } else {
    std::atomic<int> next{0};
    auto work = [&] {
      for (int h = next++; h < nh; h = next++) parts[h] = corner_connections(tri, off, h, L, opts, budget);
    };
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < opts.workers; ++w) jobs.push_back(std::async(std::launch::async, work));
    for (auto& j : jobs) j.get();
  }
  std::vector<SaddleConnection> out;
  std::set<std::tuple<int, int64_t, int64_t, int64_t>> seen;
  const double q = opts.dedup_quantum;
  for (auto& part : parts)
    for (SaddleConnection& c : part) {
      const auto key = std::make_tuple(c.start_vertex, std::llround(c.start_angle / q), std::llround(c.holonomy.x / q),
                                       std::llround(c.holonomy.y / q));
      if (seen.insert(key).second) out.push_back(std::move(c));
    }
  return out;
}

CylinderCatalog enumerate_cylinders(const TranslationSurface& s, double L, const EnumerationOptions& opts) {
  CylinderCatalog cat;
  cat.L = L;
  cat.surface_area = s.area();
  cat.connections = enumerate_saddle_connections(s, L, opts);
  const FlatTriangulation& tri = s.triangulation();
  const std::vector<double> off = all_offsets(tri);
  const int nv = tri.num_vertices();
  std::vector<double> cone(nv);
  for (int v = 0; v < nv; ++v) cone[v] = tri.cone_angle(v);
  std::vector<std::vector<std::pair<double, int>>> by_angle(nv);
  for (int i = 0; i < static_cast<int>(cat.connections.size()); ++i)
    by_angle[cat.connections[i].start_vertex].push_back({cat.connections[i].start_angle, i});
  for (auto& list : by_angle) std::sort(list.begin(), list.end());

  const double angle_tol = 1e-7;
  auto successor = [&](const SaddleConnection& c) {
    const int w = c.end_vertex;
    const double target = std::fmod(c.end_angle - std::numbers::pi + 2.0 * cone[w], cone[w]);
    const auto& list = by_angle[w];
    for (double t : {target, target - cone[w], target + cone[w]}) {
      auto it = std::lower_bound(list.begin(), list.end(), std::make_pair(t - angle_tol, -1));
      for (; it != list.end() && it->first <= t + angle_tol; ++it) {
        const SaddleConnection& d = cat.connections[it->second];
        if (dot(d.holonomy, c.holonomy) > 0.0 &&
            std::abs(cross(d.holonomy, c.holonomy)) <= 1e-9 * d.length() * c.length())
          return it->second;
      }
    }
    return -1;
  };

  Budget budget(opts.budget);
  const int nc = static_cast<int>(cat.connections.size());
  for (int c0 = 0; c0 < nc; ++c0) {
    const SaddleConnection& first = cat.connections[c0];
    if (!upper_direction(first.holonomy)) continue;
    std::vector<int> chain{c0};
    Vec2 total = first.holonomy;
    bool closed = false;
    for (int cur = c0;;) {
      const int nx = successor(cat.connections[cur]);
      if (nx < 0 || nx < c0) break;
      if (nx == c0) {
        closed = true;
        break;
      }
      if (static_cast<int>(chain.size()) > nc) break;
      chain.push_back(nx);
      total += cat.connections[nx].holonomy;
      if (total.norm() > L) break;
      cur = nx;
    }
    if (!closed) continue;
    Cylinder cyl;
    cyl.circumference = total.norm();
    cyl.holonomy = total;
    cyl.core_direction = total * (1.0 / cyl.circumference);
    cyl.boundary = chain;
    const double w = cyl.circumference;
    const double radius = std::sqrt(w * w + std::pow(cat.surface_area / w, 2)) * (1.0 + 1e-9) + 1e-9;
    cyl.height = strip_height(tri, off, first.start_vertex, first.start_angle, cyl.core_direction, radius,
                              cat.surface_area / w * (1.0 + 1e-9), opts, budget);
    if (!std::isfinite(cyl.height)) throw Error(ErrorCode::kInternal, "cylinder has no opposite boundary vertex");
    if (cyl.area() > cat.surface_area * (1.0 + 1e-9))
      throw Error(ErrorCode::kInternal, "cylinder area exceeds the surface area");
    cat.cylinders.push_back(std::move(cyl));
  }
  std::stable_sort(cat.cylinders.begin(), cat.cylinders.end(),
                   [](const Cylinder& a, const Cylinder& b) { return a.circumference < b.circumference; });
  return cat;
}

int64_t count_N(const CylinderCatalog& catalog, double T) {
  if (T > catalog.L)
    throw Error(ErrorCode::kBoundExceeded, "T exceeds the enumeration bound " + std::to_string(catalog.L));
  const auto it = std::upper_bound(catalog.cylinders.begin(), catalog.cylinders.end(), T,
                                   [](double t, const Cylinder& c) { return t < c.circumference; });
  return it - catalog.cylinders.begin();
}

CountingReport counting_report(const CylinderCatalog& catalog, double t_max, const CountingOptions& opts) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_max must be positive");
  if (opts.grid < 64) throw Error(ErrorCode::kInvalidArgument, "Cesaro grid needs at least 64 points");
  CountingReport rep;
  rep.t_max = t_max;
  rep.L = catalog.L;
  rep.fit_from = opts.fit_from;
  rep.cylinders = static_cast<int64_t>(catalog.cylinders.size());
  const int n = opts.grid;
  std::vector<double> f(n);
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = t_max * i / (n - 1);
    // The last grid point is exactly the enumeration bound.
    const int64_t count = count_N(catalog, i == n - 1 ? std::min(std::exp(t), catalog.L) : std::exp(t));
    rep.t.push_back(t);
    rep.n.push_back(count);
    f[i] = static_cast<double>(count) * std::exp(-2.0 * t);
    if (i > 0) integral += 0.5 * (f[i - 1] + f[i]) * (t - rep.t[i - 1]);
    rep.cesaro.push_back(i == 0 ? f[0] : integral / t);
  }
  rep.c1 = INFINITY;
  rep.c2 = 0.0;
  for (int i = 0; i < n; ++i)
    if (rep.t[i] >= opts.fit_from - 1e-12) {
      rep.c1 = std::min(rep.c1, f[i]);
      rep.c2 = std::max(rep.c2, f[i]);
    }
  rep.band_half_width = rep.c1 > 0.0 ? 0.5 * std::log(rep.c2 / rep.c1) : INFINITY;
  const int q = static_cast<int>(std::lround(0.75 * (n - 1)));
  const double last = rep.cesaro.back();
  rep.last_quarter_drift = last > 0.0 ? std::abs(last - rep.cesaro[q]) / last : 0.0;
  return rep;
}

CountingReport cesaro_siegel_veech(const TranslationSurface& s, double t_max, const CountingOptions& opts) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_max must be positive");
  const CylinderCatalog cat = enumerate_cylinders(s, std::exp(t_max), opts.enumeration);
  return counting_report(cat, t_max, opts);
}

}  // namespace tsdyn
