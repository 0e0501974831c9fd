// SL(2,R) action, Teichmueller geodesic flow with Delaunay renormalization,
// and the Kontsevich-Zorich cocycle as integer change-of-marking matrices.
#pragma once

#include <memory>
#include <vector>

#include "tsdyn/geometry.hpp"
#include "tsdyn/homology.hpp"
#include "tsdyn/integer_matrix.hpp"
#include "tsdyn/surface.hpp"
#include "tsdyn/triangulation.hpp"

namespace tsdyn {

/// Row i of relative is the end basis cycle i written in the start basis.
/// Cohomology values transform as v -> relative * v.
struct CocycleMatrix {
  IntMatrix relative;
  IntMatrix absolute;
  int genus = 0;
  double elapsed_time = 0.0;

  static CocycleMatrix identity(int rank, int genus);
  int rank() const { return relative.rows(); }
  /// Cocycle of this segment followed by next: next.relative * relative.
  CocycleMatrix then(const CocycleMatrix& next) const;
  /// Exact inverse (integer).
  CocycleMatrix inverse() const;
};

/// absolute^T J absolute == J in exact arithmetic.
bool is_symplectic(const CocycleMatrix& m);

struct FlowEvent {
  double time;
  int edge;
};

struct FlowOptions {
  double step = 0.02;
  double hysteresis = 1e-10;
};

struct FlowResult {
  TranslationSurface surface;
  CocycleMatrix cocycle;
  std::vector<FlowEvent> events;
};

/// Moves every vertex by g. Requires det g = 1 within 1e-12.
TranslationSurface apply_sl2(const TranslationSurface& s, const Mat2& g);

/// Homology basis of a triangulation, memoized per combinatorial type.
std::shared_ptr<const HomologyBasis> cached_homology_basis(const FlatTriangulation& tri);

/// Triangulated surface carried along the SL(2,R) action, with the start
/// basis transported through every flip.
class MarkedFlow {
 public:
  explicit MarkedFlow(const FlatTriangulation& tri, FlowOptions opts = {});

  const FlatTriangulation& triangulation() const { return tri_; }
  /// Basis at the last rebase (the start marking).
  const HomologyBasis& basis() const { return *basis_; }
  const std::vector<FlowEvent>& events() const { return events_; }
  double time() const { return time_; }

  void make_delaunay();
  /// g_t in substeps of at most opts.step, restoring Delaunay after each.
  void geodesic(double t);
  void rotate(double theta);
  /// Arbitrary element of SL(2,R), applied at once and then restored.
  void apply(const Mat2& g);
  /// Rescales all edge vectors; the marking is unaffected.
  void rescale(double s) { tri_.scale(s); }

  /// Cocycle since the previous rebase; afterwards the current
  /// triangulation's own basis becomes the marking.
  CocycleMatrix rebase();
  /// Periods of the current basis cycles (valid right after a rebase).
  std::vector<Vec2> periods() const;

 private:
  void on_flip(const FlipRecord& rec);

  FlatTriangulation tri_;
  FlowOptions opts_;
  std::shared_ptr<const HomologyBasis> basis_;
  IntMatrix classes_;  // classes of current edges in the start basis
  std::vector<FlowEvent> events_;
  double time_ = 0.0;
  double segment_time_ = 0.0;
};

/// Flows for Teichmueller time t_total (negative allowed).
FlowResult flow_segment(const TranslationSurface& s, double t_total, const FlowOptions& opts = {});

enum class Twist { kNone, kUnstable, kStable, kDerivative };

/// values -> relative * values; the twist multiplies by e^t (unstable),
/// e^-t (stable) or applies diag(e^t, e^-t) to plane-valued classes.
std::vector<double> gauss_manin_transport(const std::vector<double>& values, const CocycleMatrix& m,
                                          Twist twist = Twist::kNone);
std::vector<Vec2> gauss_manin_transport(const std::vector<Vec2>& values, const CocycleMatrix& m,
                                        Twist twist = Twist::kNone);

struct Splitting {
  int rank = 0;
  std::vector<double> re_x, im_x;
  /// Orthonormal basis (Euclidean in basis coordinates) of H^1_perp.
  std::vector<std::vector<double>> h1_perp;
  /// Real classes v with (1,0) (x) v spanning W^+: Im x, then h1_perp.
  std::vector<std::vector<double>> w_plus;
  /// Real classes v with (0,1) (x) v spanning W^-: Re x, then h1_perp.
  std::vector<std::vector<double>> w_minus;
  double area = 0.0;
  int genus = 0;

  /// pi^-_x on W(x) = R Im x + H^1_perp.
  std::vector<double> pi_minus(const std::vector<double>& u) const;
};

Splitting splitting_subspaces(const TranslationSurface& s, const HomologyBasis& basis);

}  // namespace tsdyn
