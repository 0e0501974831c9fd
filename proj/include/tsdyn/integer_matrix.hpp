// Dense int64 matrices with overflow-checked arithmetic, plus the exact
// integer algorithms the homology code needs: determinants, kernels,
// unimodular inverses and symplectic normal forms.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tsdyn {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}

  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<std::vector<int64_t>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int64_t& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  int64_t operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const std::vector<int64_t>& data() const { return data_; }

  IntMatrix transpose() const;
  IntMatrix block(int r0, int c0, int nr, int nc) const;
  std::vector<int64_t> row(int r) const;
  std::vector<std::vector<int64_t>> to_rows() const;

  bool operator==(const IntMatrix& o) const = default;

  /// Largest absolute entry.
  int64_t max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int64_t> data_;
};

/// Product with overflow detection (throws Overflow).
IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a);

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

/// Standard symplectic form on Z^{2g}: diagonal blocks [[0,1],[-1,0]].
IntMatrix standard_symplectic(int g);

/// Exact determinant (arbitrary precision internally), returned as a decimal string.
std::string exact_determinant(const IntMatrix& m);

/// M^T J M == J, evaluated in arbitrary precision.
bool is_symplectic(const IntMatrix& m, const IntMatrix& j);

/// Inverse of a unimodular matrix. Throws InvalidArgument if det != +-1.
IntMatrix unimodular_inverse(const IntMatrix& m);

/// Rows form a Z-basis of the integer kernel {x : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Returns P with P * form * P^T = standard_symplectic(n/2) for a unimodular
/// antisymmetric form. Throws InvalidArgument otherwise.
IntMatrix symplectic_reduction(const IntMatrix& form);

}  // namespace tsdyn
