// Lyapunov spectra of the Kontsevich-Zorich cocycle on absolute cohomology
// under the geodesic flow and under a spherically symmetric random walk,
// Oseledets flags, and the tensor-cocycle and regularity diagnostics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsdyn/flow.hpp"
#include "tsdyn/surface.hpp"

namespace tsdyn {

enum class Driver { kGeodesic, kRandomWalk };

const char* driver_name(Driver d);
Driver parse_driver(const std::string& s);

/// Step law g = r_{theta1} g_s r_{theta2}, thetas uniform on [0, 2 pi),
/// s uniform on [0, s_max]. The walk moves x to g^{-1} x.
struct RandomWalkConfig {
  double s_max = 1.0;
  uint64_t seed = 1;
  int64_t n_steps = 10000;
};

struct SpectrumOptions {
  Driver driver = Driver::kGeodesic;
  /// Teichmueller time (geodesic) or number of steps (walk).
  double horizon = 1e4;
  double qr_interval = 1.0;
  uint64_t seed = 1;
  double s_max = 1.0;
  int batches = 50;
  int bootstrap_resamples = 200;
  double min_horizon = 1e3;
  FlowOptions flow;
};

struct LyapunovReport {
  Driver driver = Driver::kGeodesic;
  int dimension = 0;
  double horizon = 0.0;
  uint64_t seed = 0;
  /// Nonincreasing; per unit Teichmueller time (geodesic) or per step (walk).
  std::vector<double> exponents;
  std::vector<double> std_errors;
  /// Cluster sizes from the top, single linkage at 5 standard errors.
  std::vector<int> multiplicities;
  /// Walk only: top exponent of the SL(2,R) factor along the same path
  /// (per step) and the exponents divided by it, which are comparable with
  /// the geodesic ones.
  double drift = 0.0;
  double drift_std_error = 0.0;
  std::vector<double> normalized;
  std::vector<double> normalized_std_errors;
};

LyapunovReport estimate_spectrum(const TranslationSurface& s, const SpectrumOptions& opts);

/// Exponents (log growth / time) of a product of absolute cocycle matrices,
/// applied in order, via QR of an identity frame.
std::vector<double> qr_exponents(const std::vector<CocycleMatrix>& segments, double time);

/// Groups sorted exponents: neighbours closer than gap * max(stderr) share
/// a cluster. Returns cluster sizes from the top.
std::vector<int> cluster_exponents(const std::vector<double>& exponents, const std::vector<double>& std_errors,
                                   double gap = 5.0);

struct SymmetryReport {
  /// |lambda_i + lambda_{k+1-i}| for i = 1..floor(k/2) (middle pair counted once).
  std::vector<double> residuals;
  std::vector<double> thresholds;  // 3 (s_i + s_{k+1-i})
  std::vector<bool> flagged;
  double sum = 0.0;
  double sum_threshold = 0.0;  // 3 sum s_i
  bool ok = true;
};

SymmetryReport spectrum_symmetry_report(const LyapunovReport& report);

struct FlagOptions {
  RandomWalkConfig walk;  // n_steps is the past length
  int64_t future_steps = 400;
  uint64_t frame_seed = 99;
  int batches = 50;
  int bootstrap_resamples = 200;
  FlowOptions flow;
};

/// Flags at the end point x of a past walk, in the coordinates of the
/// homology basis of x's Delaunay triangulation.
struct OseledetsFlag {
  int dimension = 0;
  std::vector<int> block_dims;  // cluster sizes from the top
  std::vector<double> exponents;
  std::vector<double> std_errors;
  /// Orthonormal columns; the first d columns span V_d (fastest d directions,
  /// determined by the past).
  std::vector<std::vector<double>> backward;
  /// Orthonormal columns; the first d columns span Vhat_d (slowest d
  /// directions, determined by the future).
  std::vector<std::vector<double>> forward;
  /// For each cumulative block dimension d < k, the smallest principal angle
  /// between V_d and Vhat_{k-d}.
  std::vector<double> transversality_angles;
  double min_angle = 0.0;
  bool transverse = false;
  TranslationSurface base;
};

OseledetsFlag compute_flags(const TranslationSurface& s, const FlagOptions& opts);

/// Smallest principal angle between the spans of two sets of columns.
double smallest_principal_angle(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

struct ConformalOptions {
  RandomWalkConfig walk;
  int64_t sigma_steps = 1000000;
  uint64_t sigma_seed = 4242;
  int batches = 50;
  int bootstrap_resamples = 200;
  FlowOptions flow;
};

struct ConformalReport {
  double sigma0 = 0.0;
  double sigma0_std_error = 0.0;
  std::vector<double> lambda, lambda_std_errors;        // walk exponents of A
  std::vector<double> tensor, tensor_std_errors;        // exponents of g (x) A
  std::vector<double> predicted, predicted_std_errors;  // sorted {+-sigma0 + lambda_i}
  std::vector<double> residuals;
  std::vector<double> tolerances;  // 3 sqrt(s_tensor^2 + s_predicted^2)
  bool match = false;
  /// Schmidt diagnostic on tensor blocks of dimension >= 2: largest spread of
  /// the exponent-normalized log singular values within the block along the
  /// orbit, and the same over the first half only.
  std::vector<int> block_dims;
  std::vector<double> schmidt_spread;
  std::vector<double> schmidt_spread_first_half;
};

ConformalReport conformal_block_test(const TranslationSurface& s, const ConformalOptions& opts);

struct RegularityOptions {
  RandomWalkConfig walk;  // seed drives the futures; n_steps unused
  int64_t future_steps = 200;
  int n_samples = 200;
  uint64_t w_seed = 5;
  uint64_t frame_seed = 99;
  double quantile = 0.05;
  FlowOptions flow;
};

struct RegularityReport {
  int block_dim = 0;
  std::vector<double> w;  // unit vector in H^1_perp, absolute coordinates
  std::vector<double> distances;
  /// Per sample, an orthonormal basis of the block hyperplane.
  std::vector<std::vector<std::vector<double>>> hyperplanes;
  double sigma = 0.0;  // empirical quantile of distances
  double fraction_above = 0.0;
  double min_distance = 0.0;
  /// Largest distance from the computed hyperplane to the forward flag,
  /// over samples (should be near 0).
  double max_intersection_residual = 0.0;
};

/// Distances from w to the hyperplane of the forward flag inside the
/// non-tautological block H^1_perp(x), over independent futures from x.
/// w is in the absolute coordinates of x's Delaunay basis; a random unit
/// vector of H^1_perp is drawn when absent.
RegularityReport regularity_test(const TranslationSurface& s, const RegularityOptions& opts,
                                 std::optional<std::vector<double>> w = std::nullopt);

/// Orthonormal basis of the absolute part of H^1_perp at the given basis.
std::vector<std::vector<double>> absolute_h1_perp(const TranslationSurface& s, const HomologyBasis& basis);

}  // namespace tsdyn
