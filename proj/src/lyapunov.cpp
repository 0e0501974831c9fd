#include "tsdyn/lyapunov.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd to_eigen(const IntMatrix& m) {
  MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

MatrixXd to_eigen(const Mat2& g) {
  MatrixXd out(2, 2);
  out << g.a, g.b, g.c, g.d;
  return out;
}

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<double> column(const MatrixXd& m, int c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

MatrixXd from_columns(const std::vector<std::vector<double>>& cols, int rows) {
  MatrixXd m(rows, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    if (static_cast<int>(cols[c].size()) != rows) throw Error(ErrorCode::kDimensionMismatch, "column has wrong length");
    for (int r = 0; r < rows; ++r) m(r, static_cast<int>(c)) = cols[c][r];
  }
  return m;
}

MatrixXd orthonormalize(const MatrixXd& a) {
  Eigen::HouseholderQR<MatrixXd> qr(a);
  return qr.householderQ() * MatrixXd::Identity(a.rows(), a.cols());
}

MatrixXd random_frame(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = normal(rng);
  return orthonormalize(m);
}

// Orthonormal frame pushed through a matrix product, with the log of each
// diagonal QR factor returned per step.
class QrFrame {
 public:
  explicit QrFrame(MatrixXd q) : q_(std::move(q)) {}

  VectorXd step(const MatrixXd& a) {
    Eigen::HouseholderQR<MatrixXd> qr(a * q_);
    const MatrixXd& packed = qr.matrixQR();
    q_ = qr.householderQ() * MatrixXd::Identity(q_.rows(), q_.cols());
    VectorXd logs(q_.cols());
    for (int i = 0; i < q_.cols(); ++i) {
      const double d = packed(i, i);
      if (!(std::abs(d) > 0.0) || !std::isfinite(d))
        throw Error(ErrorCode::kFrameDegenerate, "frame lost rank during re-orthonormalization");
      if (d < 0.0) q_.col(i) *= -1.0;
      logs(i) = std::log(std::abs(d));
    }
    return logs;
  }

  const MatrixXd& q() const { return q_; }

 private:
  MatrixXd q_;
};

// Per-batch sums of log growth and of a denominator (time, steps, or the
// drift of another factor).
class Batches {
 public:
  Batches(int dim, int count) : num_(count, VectorXd::Zero(dim)), den_(count, 0.0) {}

  void add(int b, const VectorXd& logs, double den) {
    num_[b] += logs;
    den_[b] += den;
  }

  struct Estimate {
    std::vector<double> value, error;
  };

  Estimate ratio(uint64_t seed, int resamples) const { return ratio_to(den_, seed, resamples); }

  Estimate ratio_to(const std::vector<double>& den, uint64_t seed, int resamples) const {
    const int nb = static_cast<int>(num_.size()), dim = static_cast<int>(num_[0].size());
    auto estimate = [&](const std::vector<int>& idx) {
      VectorXd n = VectorXd::Zero(dim);
      double d = 0.0;
      for (int i : idx) {
        n += num_[i];
        d += den[i];
      }
      return VectorXd(n / d);
    };
    std::vector<int> all(nb);
    std::iota(all.begin(), all.end(), 0);
    const VectorXd point = estimate(all);
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    std::uniform_int_distribution<int> pick(0, nb - 1);
    VectorXd mean = VectorXd::Zero(dim), sq = VectorXd::Zero(dim);
    std::vector<int> idx(nb);
    for (int r = 0; r < resamples; ++r) {
      for (int& i : idx) i = pick(rng);
      const VectorXd e = estimate(idx);
      mean += e;
      sq += e.cwiseProduct(e);
    }
    Estimate out;
    for (int i = 0; i < dim; ++i) {
      const double m = mean(i) / resamples;
      out.value.push_back(point(i));
      out.error.push_back(std::sqrt(std::max(0.0, sq(i) / resamples - m * m) * resamples / (resamples - 1.0)));
    }
    return out;
  }

  std::vector<double> component(int i) const {
    std::vector<double> out;
    for (const VectorXd& v : num_) out.push_back(v(i));
    return out;
  }

 private:
  std::vector<VectorXd> num_;
  std::vector<double> den_;
};

struct WalkStep {
  Mat2 g_inverse;
  MatrixXd cocycle;
};

// Moves x to b^{-1} x with b = r_{theta1} g_s r_{theta2}.
class Walker {
 public:
  Walker(const FlatTriangulation& tri, double s_max, uint64_t seed, const FlowOptions& flow)
      : flow_(tri, flow), rng_(seed), angle_(0.0, 2.0 * std::numbers::pi), s_(0.0, s_max) {
    if (!(s_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "s_max must be positive");
    flow_.make_delaunay();
    flow_.rebase();
  }

  WalkStep step() {
    const double t1 = angle_(rng_), s = s_(rng_), t2 = angle_(rng_);
    flow_.rotate(-t1);
    flow_.geodesic(-s);
    flow_.rotate(-t2);
    const CocycleMatrix m = flow_.rebase();
    return {Mat2::rotation(-t2) * Mat2::geodesic(-s) * Mat2::rotation(-t1), to_eigen(m.absolute)};
  }

  MarkedFlow& flow() { return flow_; }

 private:
  MarkedFlow flow_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> angle_, s_;
};

int batch_of(int64_t i, int64_t n, int batches) { return static_cast<int>(i * batches / n); }

void sort_descending(std::vector<double>& v, std::vector<double>& e) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] > v[b]; });
  std::vector<double> v2, e2;
  for (size_t i : order) {
    v2.push_back(v[i]);
    e2.push_back(e[i]);
  }
  v = std::move(v2);
  e = std::move(e2);
}

int checked_batches(int batches, int64_t n) {
  if (batches < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 batches");
  return static_cast<int>(std::min<int64_t>(batches, n));
}

// Right singular directions of the stored product A_n ... A_1, fastest
// first, via QR of the transposed product applied from the far end.
MatrixXd fast_right_directions(const std::vector<MatrixXd>& word, uint64_t seed) {
  const int k = static_cast<int>(word.front().rows());
  QrFrame frame(random_frame(k, seed));
  for (auto it = word.rbegin(); it != word.rend(); ++it) frame.step(it->transpose());
  return frame.q();
}

}  // namespace

const char* driver_name(Driver d) { return d == Driver::kGeodesic ? "geodesic" : "walk"; }

Driver parse_driver(const std::string& s) {
  if (s == "geodesic") return Driver::kGeodesic;
  if (s == "walk" || s == "random_walk") return Driver::kRandomWalk;
  throw Error(ErrorCode::kInvalidArgument, "unknown driver '" + s + "'");
}

std::vector<int> cluster_exponents(const std::vector<double>& exponents, const std::vector<double>& std_errors,
                                   double gap) {
  std::vector<int> sizes;
  for (size_t i = 0; i < exponents.size(); ++i) {
    if (i > 0 && std::abs(exponents[i - 1] - exponents[i]) <= gap * std::max(std_errors[i - 1], std_errors[i]))
      ++sizes.back();
    else
      sizes.push_back(1);
  }
  return sizes;
}

LyapunovReport estimate_spectrum(const TranslationSurface& s, const SpectrumOptions& opts) {
  if (!(opts.horizon >= opts.min_horizon))
    throw Error(ErrorCode::kHorizonTooShort, "horizon " + std::to_string(opts.horizon) + " is below the minimum " +
                                                 std::to_string(opts.min_horizon));
  if (opts.bootstrap_resamples < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 bootstrap resamples");
  const int dim = 2 * s.genus();
  LyapunovReport rep;
  rep.driver = opts.driver;
  rep.dimension = dim;
  rep.horizon = opts.horizon;
  rep.seed = opts.seed;
  QrFrame frame(random_frame(dim, opts.seed + 1));

  if (opts.driver == Driver::kGeodesic) {
    if (!(opts.qr_interval > 0.0)) throw Error(ErrorCode::kInvalidArgument, "qr_interval must be positive");
    std::mt19937_64 rng(opts.seed);
    const double theta = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    MarkedFlow flow(s.triangulation(), opts.flow);
    flow.make_delaunay();
    flow.rotate(theta);
    flow.rebase();
    const int64_t n = static_cast<int64_t>(std::ceil(opts.horizon / opts.qr_interval - 1e-9));
    const double dt = opts.horizon / static_cast<double>(n);
    const int nb = checked_batches(opts.batches, n);
    Batches batches(dim, nb);
    for (int64_t i = 0; i < n; ++i) {
      flow.geodesic(dt);
      batches.add(batch_of(i, n, nb), frame.step(to_eigen(flow.rebase().absolute)), dt);
    }
    const auto est = batches.ratio(opts.seed, opts.bootstrap_resamples);
    rep.exponents = est.value;
    rep.std_errors = est.error;
  } else {
    const int64_t n = static_cast<int64_t>(std::llround(opts.horizon));
    const int nb = checked_batches(opts.batches, n);
    Walker walker(s.triangulation(), opts.s_max, opts.seed, opts.flow);
    QrFrame plane(MatrixXd::Identity(2, 2));
    Batches batches(dim, nb), drift(1, nb);
    for (int64_t i = 0; i < n; ++i) {
      const WalkStep st = walker.step();
      const int b = batch_of(i, n, nb);
      batches.add(b, frame.step(st.cocycle), 1.0);
      drift.add(b, plane.step(to_eigen(st.g_inverse)).head(1), 1.0);
    }
    const auto est = batches.ratio(opts.seed, opts.bootstrap_resamples);
    rep.exponents = est.value;
    rep.std_errors = est.error;
    const auto d = drift.ratio(opts.seed, opts.bootstrap_resamples);
    rep.drift = d.value[0];
    rep.drift_std_error = d.error[0];
    const auto norm = batches.ratio_to(drift.component(0), opts.seed, opts.bootstrap_resamples);
    rep.normalized = norm.value;
    rep.normalized_std_errors = norm.error;
    sort_descending(rep.normalized, rep.normalized_std_errors);
  }
  sort_descending(rep.exponents, rep.std_errors);
  rep.multiplicities = cluster_exponents(rep.exponents, rep.std_errors);
  return rep;
}

std::vector<double> qr_exponents(const std::vector<CocycleMatrix>& segments, double time) {
  if (segments.empty()) throw Error(ErrorCode::kInvalidArgument, "no cocycle segments");
  if (!(time > 0.0)) throw Error(ErrorCode::kInvalidArgument, "time must be positive");
  const int dim = segments.front().absolute.rows();
  QrFrame frame(MatrixXd::Identity(dim, dim));
  VectorXd total = VectorXd::Zero(dim);
  for (const CocycleMatrix& m : segments) {
    if (m.absolute.rows() != dim) throw Error(ErrorCode::kDimensionMismatch, "segments act on different dimensions");
    total += frame.step(to_eigen(m.absolute));
  }
  std::vector<double> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = total(i) / time;
  return out;
}

SymmetryReport spectrum_symmetry_report(const LyapunovReport& r) {
  const int k = static_cast<int>(r.exponents.size());
  if (static_cast<int>(r.std_errors.size()) != k)
    throw Error(ErrorCode::kDimensionMismatch, "exponents and standard errors differ in length");
  SymmetryReport out;
  for (int i = 0; i < (k + 1) / 2; ++i) {
    const int j = k - 1 - i;
    const double res = std::abs(r.exponents[i] + r.exponents[j]);
    const double thr = 3.0 * (r.std_errors[i] + (i == j ? 0.0 : r.std_errors[j]));
    out.residuals.push_back(res);
    out.thresholds.push_back(thr);
    out.flagged.push_back(res >= thr);
    if (res >= thr) out.ok = false;
  }
  for (int i = 0; i < k; ++i) {
    out.sum += r.exponents[i];
    out.sum_threshold += 3.0 * r.std_errors[i];
  }
  return out;
}

double smallest_principal_angle(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kInvalidArgument, "empty subspace");
  const int n = static_cast<int>(a.front().size());
  const MatrixXd qa = orthonormalize(from_columns(a, n)), qb = orthonormalize(from_columns(b, n));
  // sin of the smallest angle = smallest distance from a unit vector of A to B.
  const MatrixXd resid = qa - qb * (qb.transpose() * qa);
  Eigen::JacobiSVD<MatrixXd> svd(resid);
  const double sin_min = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  if (sin_min < 0.7) return std::asin(sin_min);
  Eigen::JacobiSVD<MatrixXd> cos_svd(qa.transpose() * qb);
  return std::acos(std::clamp(cos_svd.singularValues().maxCoeff(), 0.0, 1.0));
}

OseledetsFlag compute_flags(const TranslationSurface& s, const FlagOptions& opts) {
  const int64_t n = opts.walk.n_steps;
  if (n < 100) throw Error(ErrorCode::kClusterOverlap, "past walk too short to resolve exponent clusters");
  if (opts.future_steps < 1) throw Error(ErrorCode::kInvalidArgument, "future_steps must be positive");
  const int dim = 2 * s.genus();
  Walker past(s.triangulation(), opts.walk.s_max, opts.walk.seed, opts.flow);
  QrFrame frame(random_frame(dim, opts.frame_seed));
  const int nb = checked_batches(opts.batches, n);
  Batches batches(dim, nb);
  for (int64_t i = 0; i < n; ++i) batches.add(batch_of(i, n, nb), frame.step(past.step().cocycle), 1.0);
  const auto est = batches.ratio(opts.walk.seed, opts.bootstrap_resamples);

  OseledetsFlag flag;
  flag.dimension = dim;
  flag.exponents = est.value;
  flag.std_errors = est.error;
  for (int i = 1; i < dim; ++i)
    if (flag.exponents[i] > flag.exponents[i - 1])
      throw Error(ErrorCode::kClusterOverlap, "QR exponents are not ordered; clusters overlap at this horizon");
  flag.block_dims = cluster_exponents(flag.exponents, flag.std_errors);
  if (flag.block_dims.size() < 2) throw Error(ErrorCode::kClusterOverlap, "no exponent clusters are separated");
  for (int c = 0; c < dim; ++c) flag.backward.push_back(column(frame.q(), c));

  const FlatTriangulation& x = past.flow().triangulation();
  flag.base = TranslationSurface::from_triangulation(x, s.label());
  Walker future(x, opts.walk.s_max, opts.walk.seed ^ 0x9e3779b97f4a7c15ull, opts.flow);
  std::vector<MatrixXd> word;
  for (int64_t i = 0; i < opts.future_steps; ++i) word.push_back(future.step().cocycle);
  const MatrixXd fast = fast_right_directions(word, opts.frame_seed + 1);
  for (int c = dim - 1; c >= 0; --c) flag.forward.push_back(column(fast, c));

  flag.min_angle = INFINITY;
  int d = 0;
  for (size_t b = 0; b + 1 < flag.block_dims.size(); ++b) {
    d += flag.block_dims[b];
    const std::vector<std::vector<double>> vb(flag.backward.begin(), flag.backward.begin() + d);
    const std::vector<std::vector<double>> vf(flag.forward.begin(), flag.forward.begin() + (dim - d));
    const double a = smallest_principal_angle(vb, vf);
    flag.transversality_angles.push_back(a);
    flag.min_angle = std::min(flag.min_angle, a);
  }
  flag.transverse = flag.min_angle > 1e-3;
  return flag;
}

ConformalReport conformal_block_test(const TranslationSurface& s, const ConformalOptions& opts) {
  const int64_t n = opts.walk.n_steps;
  if (n < 100) throw Error(ErrorCode::kClusterOverlap, "walk too short to resolve exponent clusters");
  if (opts.sigma_steps < 100) throw Error(ErrorCode::kInvalidArgument, "sigma_steps too small");
  ConformalReport rep;

  {
    std::mt19937_64 rng(opts.sigma_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), step(0.0, opts.walk.s_max);
    const int nb = checked_batches(opts.batches, opts.sigma_steps);
    Batches batches(1, nb);
    Vec2 v{1.0, 0.0};
    for (int64_t i = 0; i < opts.sigma_steps; ++i) {
      const double t1 = angle(rng), sv = step(rng), t2 = angle(rng);
      v = Mat2::rotation(-t2) * (Mat2::geodesic(-sv) * (Mat2::rotation(-t1) * v));
      const double len = v.norm();
      v = v * (1.0 / len);
      VectorXd l(1);
      l(0) = std::log(len);
      batches.add(batch_of(i, opts.sigma_steps, nb), l, 1.0);
    }
    const auto est = batches.ratio(opts.sigma_seed, opts.bootstrap_resamples);
    rep.sigma0 = est.value[0];
    rep.sigma0_std_error = est.error[0];
  }

  const int dim = 2 * s.genus();
  const int nb = checked_batches(opts.batches, n);
  Walker walker(s.triangulation(), opts.walk.s_max, opts.walk.seed, opts.flow);
  QrFrame base(random_frame(dim, opts.walk.seed + 1)), tensor(random_frame(2 * dim, opts.walk.seed + 2));
  Batches bb(dim, nb), bt(2 * dim, nb);
  std::vector<VectorXd> tensor_logs;
  tensor_logs.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    const WalkStep st = walker.step();
    const int b = batch_of(i, n, nb);
    bb.add(b, base.step(st.cocycle), 1.0);
    tensor_logs.push_back(tensor.step(kron(to_eigen(st.g_inverse), st.cocycle)));
    bt.add(b, tensor_logs.back(), 1.0);
  }
  const auto el = bb.ratio(opts.walk.seed, opts.bootstrap_resamples);
  const auto et = bt.ratio(opts.walk.seed, opts.bootstrap_resamples);
  rep.lambda = el.value;
  rep.lambda_std_errors = el.error;
  sort_descending(rep.lambda, rep.lambda_std_errors);

  // Schmidt diagnostic on the QR columns of each multi-dimensional block,
  // using the unsorted column order the frame actually carries.
  std::vector<double> tcol = et.value, tcol_err = et.error;
  rep.block_dims = cluster_exponents(tcol, tcol_err);
  int start = 0;
  for (int size : rep.block_dims) {
    if (size >= 2) {
      double mean = 0.0;
      for (int c = start; c < start + size; ++c) mean += tcol[c];
      mean /= size;
      VectorXd cum = VectorXd::Zero(size);
      double spread = 0.0, spread_half = 0.0;
      for (int64_t i = 0; i < n; ++i) {
        cum += tensor_logs[i].segment(start, size) - VectorXd::Constant(size, mean);
        const double sp = cum.maxCoeff() - cum.minCoeff();
        spread = std::max(spread, sp);
        if (i < n / 2) spread_half = std::max(spread_half, sp);
      }
      rep.schmidt_spread.push_back(spread);
      rep.schmidt_spread_first_half.push_back(spread_half);
    }
    start += size;
  }

  rep.tensor = et.value;
  rep.tensor_std_errors = et.error;
  sort_descending(rep.tensor, rep.tensor_std_errors);
  for (size_t i = 0; i < rep.lambda.size(); ++i)
    for (double sign : {1.0, -1.0}) {
      rep.predicted.push_back(sign * rep.sigma0 + rep.lambda[i]);
      rep.predicted_std_errors.push_back(std::hypot(rep.sigma0_std_error, rep.lambda_std_errors[i]));
    }
  sort_descending(rep.predicted, rep.predicted_std_errors);
  rep.match = true;
  for (size_t i = 0; i < rep.tensor.size(); ++i) {
    rep.residuals.push_back(std::abs(rep.tensor[i] - rep.predicted[i]));
    rep.tolerances.push_back(3.0 * std::hypot(rep.tensor_std_errors[i], rep.predicted_std_errors[i]));
    if (rep.residuals.back() > rep.tolerances.back()) rep.match = false;
  }
  return rep;
}

std::vector<std::vector<double>> absolute_h1_perp(const TranslationSurface& s, const HomologyBasis& basis) {
  const auto per = period_map(s, basis);
  const int g = basis.genus, k = 2 * g;
  MatrixXd a = MatrixXd::Zero(2, k);
  for (int i = 0; i < g; ++i) {
    a(0, 2 * i + 1) = per[2 * i].x;
    a(0, 2 * i) = -per[2 * i + 1].x;
    a(1, 2 * i + 1) = per[2 * i].y;
    a(1, 2 * i) = -per[2 * i + 1].y;
  }
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  if (sv(1) < 1e-9 * std::max(1.0, sv(0)))
    throw Error(ErrorCode::kRankDeficiency, "wedge constraints with Re x and Im x are not independent");
  std::vector<std::vector<double>> out;
  for (int c = 2; c < k; ++c) out.push_back(column(svd.matrixV(), c));
  return out;
}

RegularityReport regularity_test(const TranslationSurface& s, const RegularityOptions& opts,
                                 std::optional<std::vector<double>> w) {
  if (opts.n_samples < 1) throw Error(ErrorCode::kInvalidArgument, "n_samples must be positive");
  if (opts.future_steps < 1) throw Error(ErrorCode::kInvalidArgument, "future_steps must be positive");
  if (!(opts.quantile > 0.0 && opts.quantile < 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile must lie in (0,1)");
  MarkedFlow start(s.triangulation(), opts.flow);
  start.make_delaunay();
  start.rebase();
  const FlatTriangulation& x = start.triangulation();
  const TranslationSurface xs = TranslationSurface::from_triangulation(x, s.label());
  const int k = 2 * s.genus();
  const auto perp = absolute_h1_perp(xs, start.basis());
  const int m = static_cast<int>(perp.size());
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "surface has no non-tautological block with a hyperplane");
  const MatrixXd u = from_columns(perp, k);

  RegularityReport rep;
  rep.block_dim = m;
  VectorXd wv(k);
  if (w) {
    if (static_cast<int>(w->size()) != k) throw Error(ErrorCode::kDimensionMismatch, "w has wrong length");
    for (int i = 0; i < k; ++i) wv(i) = (*w)[i];
    if (!(wv.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "w must be nonzero");
    wv.normalize();
    if ((wv - u * (u.transpose() * wv)).norm() > 1e-6)
      throw Error(ErrorCode::kInvalidArgument, "w does not lie in the non-tautological block");
  } else {
    std::mt19937_64 rng(opts.w_seed);
    std::normal_distribution<double> normal;
    VectorXd c(m);
    for (int i = 0; i < m; ++i) c(i) = normal(rng);
    wv = (u * c).normalized();
  }
  rep.w.assign(wv.data(), wv.data() + k);

  std::mt19937_64 seeds(opts.walk.seed);
  for (int smp = 0; smp < opts.n_samples; ++smp) {
    const uint64_t walk_seed = seeds(), frame_seed = seeds();
    Walker future(x, opts.walk.s_max, walk_seed, opts.flow);
    std::vector<MatrixXd> word;
    for (int64_t i = 0; i < opts.future_steps; ++i) word.push_back(future.step().cocycle);
    const MatrixXd fast = fast_right_directions(word, frame_seed ^ opts.frame_seed);
    // Slow subspace of dimension k - 2 (all but the two fastest directions).
    const MatrixXd slow = fast.rightCols(k - 2);
    const MatrixXd resid = u - slow * (slow.transpose() * u);
    Eigen::JacobiSVD<MatrixXd> svd(resid, Eigen::ComputeFullV);
    const MatrixXd c = svd.matrixV().rightCols(m - 1);
    const MatrixXd h = u * c;
    rep.max_intersection_residual = std::max(rep.max_intersection_residual, svd.singularValues()(1));
    const double d = (wv - h * (h.transpose() * wv)).norm();
    rep.distances.push_back(d);
    std::vector<std::vector<double>> hp;
    for (int i = 0; i < m - 1; ++i) hp.push_back(column(h, i));
    rep.hyperplanes.push_back(std::move(hp));
  }
  std::vector<double> sorted = rep.distances;
  std::sort(sorted.begin(), sorted.end());
  const int n = opts.n_samples;
  const int qi = std::max(0, static_cast<int>(std::ceil(opts.quantile * n)) - 1);
  rep.sigma = sorted[qi];
  rep.min_distance = sorted.front();
  rep.fraction_above =
      static_cast<double>(std::count_if(sorted.begin(), sorted.end(), [&](double d) { return d > rep.sigma; })) / n;
  return rep;
}

}  // namespace tsdyn
