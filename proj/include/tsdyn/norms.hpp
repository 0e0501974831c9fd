// Finite-family proxy for the AGY norm on relative cohomology and the
// contraction/expansion check along Teichmueller geodesics.
#pragma once

#include <string>
#include <vector>

#include "tsdyn/counting.hpp"
#include "tsdyn/flow.hpp"
#include "tsdyn/homology.hpp"
#include "tsdyn/surface.hpp"

namespace tsdyn {

/// |lambda| = max over the family of |lambda(gamma)| / |hol(gamma)|.
struct ProxyNorm {
  double L_norm = 0.0;
  std::vector<SaddleConnection> family;
  /// Class of each family member in the basis (relative coordinates).
  std::vector<std::vector<int64_t>> classes;
  std::string fingerprint;
  int rank = 0;
};

/// Family of all saddle connections of length <= L_norm; L_norm <= 0 means
/// twice the longest edge of the Delaunay triangulation. Throws
/// DegenerateFamily if the family does not span relative homology.
ProxyNorm make_proxy_norm(const TranslationSurface& s, const HomologyBasis& basis, double L_norm = 0.0);

double proxy_norm(const ProxyNorm& norm, const std::vector<double>& lambda);
/// Plane-valued classes: |lambda(gamma)| is the Euclidean length.
double proxy_norm(const ProxyNorm& norm, const std::vector<Vec2>& lambda);

struct ContractionOptions {
  /// Rotation applied before flowing (selects the geodesic).
  double theta = 0.0;
  double sample_interval = 0.5;
  double thick_systole = 0.1;
  double min_thick_fraction = 0.5;
  FlowOptions flow;
};

struct ContractionReport {
  double t_max = 0.0;
  std::vector<double> times;
  std::vector<double> systole;
  double thick_fraction = 0.0;
  /// W^- basis: (0,1) (x) Re x, then (0,1) (x) H^1_perp; W^+ basis:
  /// (1,0) (x) Im x, then (1,0) (x) H^1_perp. log proxy norms per sample
  /// under the derivative action of g_t.
  std::vector<std::vector<double>> minus_log_norms;
  std::vector<std::vector<double>> plus_log_norms;
  /// Least-squares slopes over [t_max/2, t_max].
  std::vector<double> minus_slopes;
  std::vector<double> plus_slopes;
  /// max / min over thick samples of proxy norm / Euclidean coordinate norm
  /// of the tracked H^1_perp classes (1 when there are none).
  double comparability = 1.0;
};

/// Throws NotRecurrent when the systole stays above thick_systole for less
/// than min_thick_fraction of the samples.
ContractionReport contraction_report(const TranslationSurface& s, double t_max, const ContractionOptions& opts = {});

}  // namespace tsdyn
