#include "tsdyn/norms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Projection onto H^1_perp along the tautological plane; commutes with the
// cocycle.
void project_perp(const HomologyBasis& basis, const std::vector<double>& re, const std::vector<double>& im,
                  double area, std::vector<double>& u) {
  const double a = -wedge(basis, im, u) / area;
  const double b = wedge(basis, re, u) / area;
  for (size_t i = 0; i < u.size(); ++i) u[i] -= a * re[i] + b * im[i];
}

double lsq_slope(const std::vector<double>& t, const std::vector<double>& y, double from) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < from - 1e-12) continue;
    n += 1;
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  if (n < 2 || den <= 0.0) throw Error(ErrorCode::kInvalidArgument, "too few samples for a slope fit");
  return (n * sty - st * sy) / den;
}

}  // namespace

ProxyNorm make_proxy_norm(const TranslationSurface& s, const HomologyBasis& basis, double L_norm) {
  const FlatTriangulation& tri = s.triangulation();
  if (basis.fingerprint != tri.fingerprint())
    throw Error(ErrorCode::kBasisMismatch, "homology basis was computed on a different triangulation");
  ProxyNorm out;
  if (L_norm <= 0.0) {
    FlatTriangulation del = tri;
    del.make_delaunay(nullptr, 1e-10);
    L_norm = 2.0 * del.longest_edge();
  }
  out.L_norm = L_norm;
  out.fingerprint = basis.fingerprint;
  out.rank = basis.rank();
  EnumerationOptions eo;
  eo.track_paths = true;
  out.family = enumerate_saddle_connections(s, L_norm, eo);
  if (out.family.empty()) throw Error(ErrorCode::kDegenerateFamily, "no saddle connections below the cutoff");
  const int k = basis.rank();
  Eigen::MatrixXd m(static_cast<int>(out.family.size()), k);
  for (size_t r = 0; r < out.family.size(); ++r) {
    std::vector<int64_t> cls(k, 0);
    const auto& chain = out.family[r].chain;
    for (int e = 0; e < tri.num_edges(); ++e)
      if (chain[e])
        for (int j = 0; j < k; ++j) cls[j] = checked_add(cls[j], checked_mul(chain[e], basis.edge_coordinates(e, j)));
    for (int j = 0; j < k; ++j) m(static_cast<int>(r), j) = static_cast<double>(cls[j]);
    out.classes.push_back(std::move(cls));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  if (lu.rank() < k) throw Error(ErrorCode::kDegenerateFamily, "saddle connection family does not span relative homology");
  return out;
}

double proxy_norm(const ProxyNorm& norm, const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != norm.rank) throw Error(ErrorCode::kDimensionMismatch, "class has wrong length");
  double best = 0.0;
  for (size_t r = 0; r < norm.family.size(); ++r) {
    double v = 0.0;
    for (int j = 0; j < norm.rank; ++j) v += static_cast<double>(norm.classes[r][j]) * lambda[j];
    best = std::max(best, std::abs(v) / norm.family[r].length());
  }
  return best;
}

double proxy_norm(const ProxyNorm& norm, const std::vector<Vec2>& lambda) {
  if (static_cast<int>(lambda.size()) != norm.rank) throw Error(ErrorCode::kDimensionMismatch, "class has wrong length");
  double best = 0.0;
  for (size_t r = 0; r < norm.family.size(); ++r) {
    Vec2 v;
    for (int j = 0; j < norm.rank; ++j) v += lambda[j] * static_cast<double>(norm.classes[r][j]);
    best = std::max(best, v.norm() / norm.family[r].length());
  }
  return best;
}

ContractionReport contraction_report(const TranslationSurface& s, double t_max, const ContractionOptions& opts) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_max must be positive");
  if (!(opts.sample_interval > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample_interval must be positive");
  const int64_t n = static_cast<int64_t>(std::ceil(t_max / opts.sample_interval - 1e-9));
  const double dt = t_max / static_cast<double>(n);
  auto start = [&] {
    MarkedFlow f(s.triangulation(), opts.flow);
    f.make_delaunay();
    f.rotate(opts.theta);
    f.rebase();
    return f;
  };

  ContractionReport rep;
  rep.t_max = t_max;
  {
    MarkedFlow probe = start();
    const double allowed_thin = (1.0 - opts.min_thick_fraction) * static_cast<double>(n + 1);
    int64_t thick = 0;
    for (int64_t i = 0; i <= n; ++i) {
      if (i > 0) {
        try {
          probe.geodesic(dt);
          probe.rebase();
        } catch (const Error&) {
          // Remaining samples count as thin.
          if (static_cast<double>(thick) < opts.min_thick_fraction * static_cast<double>(n + 1)) break;
          throw;
        }
      }
      const double sys = probe.triangulation().shortest_edge();
      thick += sys >= opts.thick_systole;
      rep.times.push_back(i * dt);
      rep.systole.push_back(sys);
      if (static_cast<double>(i + 1 - thick) > allowed_thin) break;
    }
    rep.thick_fraction = static_cast<double>(thick) / static_cast<double>(n + 1);
    if (rep.thick_fraction < opts.min_thick_fraction)
      throw Error(ErrorCode::kNotRecurrent, "systole >= " + std::to_string(opts.thick_systole) + " on only " +
                                                std::to_string(rep.thick_fraction) + " of the samples");
  }

  MarkedFlow flow = start();

  const TranslationSurface x0 = TranslationSurface::from_triangulation(flow.triangulation(), s.label());
  const Splitting sp = splitting_subspaces(x0, flow.basis());
  std::vector<std::vector<double>> tracked = sp.h1_perp;
  std::vector<double> log_scale(tracked.size(), 0.0);
  const int m = static_cast<int>(tracked.size());

  rep.minus_log_norms.assign(m + 1, {});
  rep.plus_log_norms.assign(m + 1, {});
  double ratio_min = INFINITY, ratio_max = 0.0;
  for (int64_t i = 0; i <= n; ++i) {
    if (i > 0) {
      flow.geodesic(dt);
      const CocycleMatrix c = flow.rebase();
      for (auto& u : tracked) {
        std::vector<double> v(u.size(), 0.0);
        for (int r = 0; r < c.rank(); ++r)
          for (int j = 0; j < c.rank(); ++j) v[r] += static_cast<double>(c.relative(r, j)) * u[j];
        u = std::move(v);
      }
    }
    const double t = rep.times[i];
    const TranslationSurface xt = TranslationSurface::from_triangulation(flow.triangulation(), s.label());
    const HomologyBasis& basis = flow.basis();
    const auto per = period_map(xt, basis);
    const auto re = real_part(per), im = imag_part(per);
    const double area = wedge(basis, re, im);
    const ProxyNorm pn = make_proxy_norm(xt, basis);
    const bool is_thick = rep.systole[i] >= opts.thick_systole;
    // Transported Re x0 and Im x0 are e^{-t} Re x_t and e^{t} Im x_t.
    rep.minus_log_norms[0].push_back(-2.0 * t + std::log(proxy_norm(pn, re)));
    rep.plus_log_norms[0].push_back(2.0 * t + std::log(proxy_norm(pn, im)));
    for (int j = 0; j < m; ++j) {
      auto& u = tracked[j];
      project_perp(basis, re, im, area, u);
      const double len = norm2(u);
      if (!(len > 0.0)) throw Error(ErrorCode::kFrameDegenerate, "tracked class vanished");
      for (double& x : u) x /= len;
      log_scale[j] += std::log(len);
      const double pv = proxy_norm(pn, u);
      rep.minus_log_norms[j + 1].push_back(-t + log_scale[j] + std::log(pv));
      rep.plus_log_norms[j + 1].push_back(t + log_scale[j] + std::log(pv));
      if (is_thick) {
        ratio_min = std::min(ratio_min, pv);
        ratio_max = std::max(ratio_max, pv);
      }
    }
  }
  for (int j = 0; j <= m; ++j) {
    rep.minus_slopes.push_back(lsq_slope(rep.times, rep.minus_log_norms[j], t_max / 2));
    rep.plus_slopes.push_back(lsq_slope(rep.times, rep.plus_log_norms[j], t_max / 2));
  }
  if (m > 0 && ratio_max > 0.0) rep.comparability = ratio_max / ratio_min;
  return rep;
}

}  // namespace tsdyn
