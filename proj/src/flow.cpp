#include "tsdyn/flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "tsdyn/errors.hpp"

namespace tsdyn {

CocycleMatrix CocycleMatrix::identity(int rank, int genus) {
  return {IntMatrix::identity(rank), IntMatrix::identity(2 * genus), genus, 0.0};
}

CocycleMatrix CocycleMatrix::then(const CocycleMatrix& next) const {
  if (next.rank() != rank() || next.genus != genus)
    throw Error(ErrorCode::kDimensionMismatch, "composing cocycles of different ranks");
  return {next.relative * relative, next.absolute * absolute, genus, elapsed_time + next.elapsed_time};
}

CocycleMatrix CocycleMatrix::inverse() const {
  return {unimodular_inverse(relative), unimodular_inverse(absolute), genus, -elapsed_time};
}

bool is_symplectic(const CocycleMatrix& m) { return is_symplectic(m.absolute, standard_symplectic(m.genus)); }

TranslationSurface apply_sl2(const TranslationSurface& s, const Mat2& g) {
  if (std::abs(g.det() - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidArgument, "matrix is not in SL(2,R)");
  return s.transformed(g);
}

std::shared_ptr<const HomologyBasis> cached_homology_basis(const FlatTriangulation& tri) {
  thread_local std::unordered_map<std::string, std::shared_ptr<const HomologyBasis>> cache;
  const std::string key = tri.fingerprint();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > 20000) cache.clear();
  auto b = std::make_shared<const HomologyBasis>(compute_homology_basis(tri));
  cache.emplace(key, b);
  return b;
}

MarkedFlow::MarkedFlow(const FlatTriangulation& tri, FlowOptions opts)
    : tri_(tri), opts_(opts), basis_(cached_homology_basis(tri)), classes_(basis_->edge_coordinates) {
  if (!(opts_.step > 0.0) || opts_.step > 0.05)
    throw Error(ErrorCode::kInvalidArgument, "flow step must lie in (0, 0.05]");
}

void MarkedFlow::on_flip(const FlipRecord& rec) {
  const int a = FlatTriangulation::edge_of(rec.a1), b = FlatTriangulation::edge_of(rec.b2);
  const int sa = FlatTriangulation::sign_of(rec.a1), sb = FlatTriangulation::sign_of(rec.b2);
  for (int c = 0; c < classes_.cols(); ++c)
    classes_(rec.edge, c) = checked_add(sa * classes_(a, c), sb * classes_(b, c));
  events_.push_back({time_, rec.edge});
}

void MarkedFlow::make_delaunay() {
  tri_.make_delaunay([this](const FlipRecord& r) { on_flip(r); }, opts_.hysteresis);
  tri_.check_nondegenerate();
}

void MarkedFlow::geodesic(double t) {
  if (t == 0.0) return;
  const int n = static_cast<int>(std::ceil(std::abs(t) / opts_.step - 1e-9));
  const double dt = t / n;
  const Mat2 g = Mat2::geodesic(dt);
  for (int i = 0; i < n; ++i) {
    tri_.apply(g);
    time_ += dt;
    segment_time_ += dt;
    make_delaunay();
  }
}

void MarkedFlow::rotate(double theta) {
  tri_.apply(Mat2::rotation(theta));
  make_delaunay();
}

void MarkedFlow::apply(const Mat2& g) {
  if (std::abs(g.det() - 1.0) > 1e-12) throw Error(ErrorCode::kInvalidArgument, "matrix is not in SL(2,R)");
  tri_.apply(g);
  make_delaunay();
}

CocycleMatrix MarkedFlow::rebase() {
  auto next = cached_homology_basis(tri_);
  const int k = basis_->rank(), g = basis_->genus;
  CocycleMatrix m;
  m.genus = g;
  m.elapsed_time = segment_time_;
  m.relative = IntMatrix(k, k);
  for (int i = 0; i < k; ++i) {
    const auto& chain = next->relative_cycles[i];
    for (int e = 0; e < tri_.num_edges(); ++e) {
      if (!chain[e]) continue;
      for (int j = 0; j < k; ++j)
        m.relative(i, j) = checked_add(m.relative(i, j), checked_mul(chain[e], classes_(e, j)));
    }
  }
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 2 * g; j < k; ++j)
      if (m.relative(i, j) != 0) throw Error(ErrorCode::kInternal, "absolute cycle acquired a relative component");
  m.absolute = m.relative.block(0, 0, 2 * g, 2 * g);
  basis_ = std::move(next);
  classes_ = basis_->edge_coordinates;
  segment_time_ = 0.0;
  return m;
}

std::vector<Vec2> MarkedFlow::periods() const {
  std::vector<Vec2> out(basis_->rank());
  for (int i = 0; i < basis_->rank(); ++i) out[i] = tri_.chain_holonomy(basis_->relative_cycles[i]);
  return out;
}

FlowResult flow_segment(const TranslationSurface& s, double t_total, const FlowOptions& opts) {
  MarkedFlow flow(s.triangulation(), opts);
  flow.make_delaunay();
  flow.geodesic(t_total);
  FlowResult out;
  out.cocycle = flow.rebase();
  out.cocycle.elapsed_time = t_total;
  out.surface = TranslationSurface::from_triangulation(flow.triangulation(), s.label());
  out.events = flow.events();
  return out;
}

std::vector<double> gauss_manin_transport(const std::vector<double>& values, const CocycleMatrix& m, Twist twist) {
  if (static_cast<int>(values.size()) != m.rank())
    throw Error(ErrorCode::kDimensionMismatch, "cochain length does not match the cocycle rank");
  if (twist == Twist::kDerivative)
    throw Error(ErrorCode::kInvalidArgument, "the derivative twist applies to plane-valued classes");
  double factor = 1.0;
  if (twist == Twist::kUnstable) factor = std::exp(m.elapsed_time);
  if (twist == Twist::kStable) factor = std::exp(-m.elapsed_time);
  std::vector<double> out(values.size(), 0.0);
  for (int i = 0; i < m.rank(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < m.rank(); ++j) acc += static_cast<double>(m.relative(i, j)) * values[j];
    out[i] = factor * acc;
  }
  return out;
}

std::vector<Vec2> gauss_manin_transport(const std::vector<Vec2>& values, const CocycleMatrix& m, Twist twist) {
  const auto re = gauss_manin_transport(real_part(values), m, twist == Twist::kDerivative ? Twist::kUnstable : twist);
  const auto im = gauss_manin_transport(imag_part(values), m, twist == Twist::kDerivative ? Twist::kStable : twist);
  std::vector<Vec2> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

std::vector<double> Splitting::pi_minus(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != rank) throw Error(ErrorCode::kDimensionMismatch, "class has wrong length");
  double w = 0.0;
  for (int i = 0; i < genus; ++i) w += re_x[2 * i] * u[2 * i + 1] - re_x[2 * i + 1] * u[2 * i];
  const double c = w / area;
  std::vector<double> out = u;
  for (int i = 0; i < rank; ++i) out[i] += c * (re_x[i] - im_x[i]);
  return out;
}

Splitting splitting_subspaces(const TranslationSurface& s, const HomologyBasis& basis) {
  const auto per = period_map(s, basis);
  Splitting sp;
  sp.rank = basis.rank();
  sp.genus = basis.genus;
  sp.re_x = real_part(per);
  sp.im_x = imag_part(per);
  sp.area = wedge(basis, sp.re_x, sp.im_x);
  const int k = sp.rank;
  // Rows: v -> wedge(Re x, v) and v -> wedge(Im x, v).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, k);
  for (int i = 0; i < basis.genus; ++i) {
    a(0, 2 * i + 1) = sp.re_x[2 * i];
    a(0, 2 * i) = -sp.re_x[2 * i + 1];
    a(1, 2 * i + 1) = sp.im_x[2 * i];
    a(1, 2 * i) = -sp.im_x[2 * i + 1];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  if (sv.size() < 2 || sv(1) < 1e-9 * std::max(1.0, sv(0)))
    throw Error(ErrorCode::kRankDeficiency, "wedge constraints with Re x and Im x are not independent");
  const Eigen::MatrixXd v = svd.matrixV();
  for (int c = 2; c < k; ++c) {
    std::vector<double> col(k);
    for (int i = 0; i < k; ++i) col[i] = v(i, c);
    sp.h1_perp.push_back(col);
  }
  sp.w_plus.push_back(sp.im_x);
  sp.w_minus.push_back(sp.re_x);
  for (const auto& h : sp.h1_perp) {
    sp.w_plus.push_back(h);
    sp.w_minus.push_back(h);
  }
  return sp;
}

}  // namespace tsdyn
