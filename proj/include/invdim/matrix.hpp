#pragma once

#include <array>
#include <initializer_list>
#include <vector>

#include "invdim/geometry.hpp"

namespace invdim {

/// Small dense n x n real matrix, n <= kMaxDim, stack-allocated.
/// Carrier for tangent maps and their compositions.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n);

  static Matrix identity(int n);
  static Matrix diagonal(std::initializer_list<double> entries);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int dim() const { return n_; }
  double operator()(int i, int j) const { return e_[size_t(i * n_ + j)]; }
  double& operator()(int i, int j) { return e_[size_t(i * n_ + j)]; }

  bool finite() const;
  Vec apply(const Vec& v) const;

 private:
  std::array<double, kMaxDim * kMaxDim> e_{};
  int n_ = 0;
};

/// Singular values in non-increasing order, S1 >= ... >= Sn >= 0.
struct SingularSpectrum {
  std::vector<double> values;

  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }
};

/// Determinant split into sign and log magnitude so that long products of
/// Jacobians never overflow. sign == 0 iff log_magnitude is -infinity.
struct LogDet {
  int sign = 0;
  double log_magnitude;

  LogDet(int s, double lm) : sign(s), log_magnitude(lm) {}
  static LogDet singular();

  double value() const;
};

/// One-sided Jacobi: cyclic column rotations until the off-diagonal mass of
/// the implicit Gram matrix drops below 1e-14 of its Frobenius norm.
SingularSpectrum singular_values(const Matrix& a);

/// Largest singular value; equals sup over unit vectors of |A v|.
double operator_norm(const Matrix& a);

/// Partial-pivot elimination, accumulating log |pivot| instead of the product.
LogDet log_abs_det(const Matrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// Solves A x = b via partial-pivot elimination. Throws InvalidInput when singular.
Vec solve(const Matrix& a, const Vec& b);

}  // namespace invdim
