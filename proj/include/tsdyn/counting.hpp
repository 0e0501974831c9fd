// Saddle connections by sector development, cylinders from closed chains of
// parallel connections, the counting function N(T) and its Cesaro average.
#pragma once

#include <cstdint>
#include <vector>

#include "tsdyn/geometry.hpp"
#include "tsdyn/surface.hpp"

namespace tsdyn {

struct SaddleConnection {
  Vec2 holonomy;
  int start_vertex = -1;
  int end_vertex = -1;
  /// Angles at the endpoints, measured counterclockwise from the vertex's
  /// reference half-edge; in [0, cone angle). end_angle is the direction of
  /// the reversed connection.
  double start_angle = 0.0;
  double end_angle = 0.0;
  /// Half-edge whose corner (or which itself) contains the start direction.
  int start_half_edge = -1;
  /// Filled only when paths are tracked: edges crossed in order, half-edges
  /// whose vectors sum to the holonomy, and the resulting edge chain.
  std::vector<int> crossings;
  std::vector<int> chart_path;
  std::vector<int64_t> chain;

  double length() const { return holonomy.norm(); }
};

struct EnumerationOptions {
  /// Cap on developed triangles across the whole call.
  int64_t budget = 200'000'000;
  bool track_paths = false;
  /// Relative tolerance of the strict window test.
  double window_eps = 1e-10;
  double dedup_quantum = 1e-9;
  int workers = 1;
};

/// All saddle connections of length <= L, each once per orientation.
/// Throws BudgetExceeded when the development cap is hit.
std::vector<SaddleConnection> enumerate_saddle_connections(const TranslationSurface& s, double L,
                                                           const EnumerationOptions& opts = {});

struct Cylinder {
  double circumference = 0.0;
  double height = 0.0;
  Vec2 holonomy;        // of the core curve, direction in [0, pi)
  Vec2 core_direction;  // unit
  /// Indices into the catalog's connections: the boundary component that is
  /// traversed in core_direction with the cylinder on its left.
  std::vector<int> boundary;

  double area() const { return circumference * height; }
};

struct CylinderCatalog {
  double L = 0.0;
  double surface_area = 0.0;
  std::vector<SaddleConnection> connections;
  /// Sorted by circumference.
  std::vector<Cylinder> cylinders;
};

/// Maximal cylinders of circumference <= L, each once.
CylinderCatalog enumerate_cylinders(const TranslationSurface& s, double L, const EnumerationOptions& opts = {});

/// Number of cylinders with circumference <= T. Throws BoundExceeded if T > L.
int64_t count_N(const CylinderCatalog& catalog, double T);

struct CountingReport {
  double t_max = 0.0;
  double L = 0.0;
  std::vector<double> t;
  std::vector<int64_t> n;
  /// Running average (1/t) int_0^t N(e^s) e^{-2s} ds (trapezoid); the entry
  /// at t = 0 is N(1).
  std::vector<double> cesaro;
  /// min and max of N(e^t) e^{-2t} over the grid points with t >= fit_from.
  double c1 = 0.0;
  double c2 = 0.0;
  double fit_from = 1.0;
  /// (log c2 - log c1) / 2: half-width of the band of log N(e^t) - 2t.
  double band_half_width = 0.0;
  /// |cesaro(t_max) - cesaro(3 t_max / 4)| / cesaro(t_max).
  double last_quarter_drift = 0.0;
  int64_t cylinders = 0;
};

struct CountingOptions {
  int grid = 257;
  double fit_from = 1.0;
  EnumerationOptions enumeration;
};

/// Counting report from an existing catalog (requires e^{t_max} <= L).
CountingReport counting_report(const CylinderCatalog& catalog, double t_max, const CountingOptions& opts = {});

/// Enumerates cylinders up to e^{t_max} once and builds the report.
CountingReport cesaro_siegel_veech(const TranslationSurface& s, double t_max, const CountingOptions& opts = {});

}  // namespace tsdyn
