#include "tsdyn/integer_matrix.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <utility>

#include "tsdyn/errors.hpp"

namespace tsdyn {

namespace {

using Big = boost::multiprecision::cpp_int;
using BigMat = std::vector<std::vector<Big>>;

BigMat to_big(const IntMatrix& m) {
  BigMat out(m.rows(), std::vector<Big>(m.cols()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

IntMatrix from_big(const BigMat& b, int rows, int cols) {
  IntMatrix out(rows, cols);
  const Big lo = std::numeric_limits<int64_t>::min();
  const Big hi = std::numeric_limits<int64_t>::max();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (b[r][c] < lo || b[r][c] > hi) throw Error(ErrorCode::kOverflow, "integer matrix entry exceeds int64");
      out(r, c) = static_cast<int64_t>(b[r][c]);
    }
  return out;
}

BigMat big_mul(const BigMat& a, const BigMat& b) {
  const size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  BigMat out(n, std::vector<Big>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

BigMat big_transpose(const BigMat& a) {
  if (a.empty()) return {};
  BigMat out(a[0].size(), std::vector<Big>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

Big floor_div(const Big& a, const Big& b) {
  Big q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<int64_t>>& rows) {
  const int nr = static_cast<int>(rows.size());
  const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
  IntMatrix m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) throw Error(ErrorCode::kDimensionMismatch, "ragged integer matrix");
    for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::block(int r0, int c0, int nr, int nc) const {
  IntMatrix b(nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

std::vector<int64_t> IntMatrix::row(int r) const {
  return {data_.begin() + static_cast<ptrdiff_t>(r) * cols_, data_.begin() + static_cast<ptrdiff_t>(r + 1) * cols_};
}

std::vector<std::vector<int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<int64_t>> out;
  for (int r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

int64_t IntMatrix::max_abs() const {
  int64_t m = 0;
  for (int64_t v : data_) m = std::max(m, v < 0 ? -v : v);
  return m;
}

int64_t checked_add(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::kOverflow, "int64 addition overflow");
  return out;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::kOverflow, "int64 multiplication overflow");
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "matrix product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      __int128 acc = 0;
      for (int l = 0; l < a.cols(); ++l) acc += static_cast<__int128>(a(i, l)) * b(l, j);
      if (acc > std::numeric_limits<int64_t>::max() || acc < std::numeric_limits<int64_t>::min())
        throw Error(ErrorCode::kOverflow, "int64 matrix product overflow");
      out(i, j) = static_cast<int64_t>(acc);
    }
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::kDimensionMismatch, "matrix sum shape mismatch");
  IntMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = checked_add(a(i, j), b(i, j));
  return out;
}

IntMatrix operator-(const IntMatrix& a) {
  IntMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = checked_mul(a(i, j), -1);
  return out;
}

IntMatrix standard_symplectic(int g) {
  IntMatrix j(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    j(2 * i, 2 * i + 1) = 1;
    j(2 * i + 1, 2 * i) = -1;
  }
  return j;
}

std::string exact_determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "determinant of non-square matrix");
  const int n = m.rows();
  if (n == 0) return "1";
  BigMat a = to_big(m);
  Big prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return "0";
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  Big det = a[n - 1][n - 1] * sign;
  return det.str();
}

bool is_symplectic(const IntMatrix& m, const IntMatrix& j) {
  if (m.rows() != m.cols() || j.rows() != m.rows() || j.cols() != m.cols()) return false;
  const BigMat bm = to_big(m), bj = to_big(j);
  return big_mul(big_mul(big_transpose(bm), bj), bm) == bj;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kDimensionMismatch, "inverse of non-square matrix");
  const int n = m.rows();
  BigMat a = to_big(m);
  BigMat inv = to_big(IntMatrix::identity(n));
  auto row_sub = [&](int dst, int src, Big q) {
    if (q == 0) return;
    for (int c = 0; c < n; ++c) {
      a[dst][c] -= q * a[src][c];
      inv[dst][c] -= q * inv[src][c];
    }
  };
  for (int col = 0; col < n; ++col) {
    // Euclid on column entries at rows >= col until a single nonzero remains.
    for (;;) {
      int best = -1;
      for (int r = col; r < n; ++r)
        if (a[r][col] != 0 && (best < 0 || abs(a[r][col]) < abs(a[best][col]))) best = r;
      if (best < 0) throw Error(ErrorCode::kInvalidArgument, "matrix is singular");
      std::swap(a[col], a[best]);
      std::swap(inv[col], inv[best]);
      bool done = true;
      for (int r = col + 1; r < n; ++r) {
        if (a[r][col] == 0) continue;
        row_sub(r, col, floor_div(a[r][col], a[col][col]));
        if (a[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (abs(a[col][col]) != 1) throw Error(ErrorCode::kInvalidArgument, "matrix is not unimodular");
    if (a[col][col] < 0)
      for (int c = 0; c < n; ++c) {
        a[col][c] = -a[col][c];
        inv[col][c] = -inv[col][c];
      }
  }
  for (int col = n - 1; col >= 0; --col)
    for (int r = 0; r < col; ++r) row_sub(r, col, a[r][col]);
  return from_big(inv, n, n);
}

IntMatrix integer_kernel(const IntMatrix& m) {
  const int nr = m.rows(), nc = m.cols();
  BigMat a = to_big(m);
  BigMat u = to_big(IntMatrix::identity(nc));
  auto col_sub = [&](int dst, int src, Big q) {
    if (q == 0) return;
    for (int r = 0; r < nr; ++r) a[r][dst] -= q * a[r][src];
    for (int r = 0; r < nc; ++r) u[r][dst] -= q * u[r][src];
  };
  auto col_swap = [&](int x, int y) {
    if (x == y) return;
    for (int r = 0; r < nr; ++r) std::swap(a[r][x], a[r][y]);
    for (int r = 0; r < nc; ++r) std::swap(u[r][x], u[r][y]);
  };
  int pivot = 0;
  for (int row = 0; row < nr && pivot < nc; ++row) {
    for (;;) {
      int best = -1;
      for (int c = pivot; c < nc; ++c)
        if (a[row][c] != 0 && (best < 0 || abs(a[row][c]) < abs(a[row][best]))) best = c;
      if (best < 0) break;
      col_swap(pivot, best);
      bool done = true;
      for (int c = pivot + 1; c < nc; ++c) {
        if (a[row][c] == 0) continue;
        col_sub(c, pivot, floor_div(a[row][c], a[row][pivot]));
        if (a[row][c] != 0) done = false;
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  const int dim = nc - pivot;
  BigMat k(dim, std::vector<Big>(nc));
  for (int i = 0; i < dim; ++i)
    for (int r = 0; r < nc; ++r) k[i][r] = u[r][pivot + i];
  // Pairwise size reduction; unimodular, so the rows stay a basis.
  auto dot = [&](int i, int j) {
    Big s = 0;
    for (int r = 0; r < nc; ++r) s += k[i][r] * k[j][r];
    return s;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        if (i == j) continue;
        const Big nn = dot(i, i);
        if (nn == 0) continue;
        const Big q = floor_div(2 * dot(i, j) + nn, 2 * nn);
        if (q == 0) continue;
        Big before = dot(j, j);
        for (int r = 0; r < nc; ++r) k[j][r] -= q * k[i][r];
        if (dot(j, j) < before) {
          changed = true;
        } else {
          for (int r = 0; r < nc; ++r) k[j][r] += q * k[i][r];
        }
      }
  }
  return from_big(k, dim, nc);
}

IntMatrix symplectic_reduction(const IntMatrix& form) {
  const int n = form.rows();
  if (n != form.cols() || n % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "symplectic form must be square of even size");
  const BigMat w = to_big(form);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (w[i][j] != -w[j][i]) throw Error(ErrorCode::kInvalidArgument, "form is not antisymmetric");
  auto pair = [&](const std::vector<Big>& x, const std::vector<Big>& y) {
    Big s = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < n; ++j)
        if (y[j] != 0) s += x[i] * w[i][j] * y[j];
    }
    return s;
  };
  std::vector<std::vector<Big>> pool;
  for (int i = 0; i < n; ++i) {
    std::vector<Big> v(n);
    v[i] = 1;
    pool.push_back(v);
  }
  BigMat out;
  while (!pool.empty()) {
    std::vector<Big> e = pool.front();
    pool.erase(pool.begin());
    std::vector<Big> val(pool.size());
    for (size_t j = 0; j < pool.size(); ++j) val[j] = pair(e, pool[j]);
    // Euclid among pool vectors until exactly one pairs nontrivially with e.
    for (;;) {
      int best = -1;
      for (size_t j = 0; j < pool.size(); ++j)
        if (val[j] != 0 && (best < 0 || abs(val[j]) < abs(val[best]))) best = static_cast<int>(j);
      if (best < 0) throw Error(ErrorCode::kInvalidArgument, "form is degenerate");
      bool done = true;
      for (size_t j = 0; j < pool.size(); ++j) {
        if (static_cast<int>(j) == best || val[j] == 0) continue;
        const Big q = floor_div(val[j], val[best]);
        for (int c = 0; c < n; ++c) pool[j][c] -= q * pool[best][c];
        val[j] -= q * val[best];
        if (val[j] != 0) done = false;
      }
      if (done) {
        if (abs(val[best]) != 1) throw Error(ErrorCode::kInvalidArgument, "form is not unimodular");
        std::vector<Big> f = pool[best];
        if (val[best] < 0)
          for (auto& x : f) x = -x;
        pool.erase(pool.begin() + best);
        for (auto& v : pool) {
          const Big vf = pair(v, f), ve = pair(v, e);
          for (int c = 0; c < n; ++c) v[c] = v[c] - vf * e[c] + ve * f[c];
        }
        out.push_back(e);
        out.push_back(f);
        break;
      }
    }
  }
  return from_big(out, n, n);
}

}  // namespace tsdyn
