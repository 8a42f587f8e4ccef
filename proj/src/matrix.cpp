#include "invdim/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invdim/errors.hpp"

namespace invdim {

namespace {

void check_dim(int n, const char* who) {
  if (n < 1 || n > kMaxDim) throw InvalidInput(std::string(who) + ": dimension must be in [1, 8]");
}

void check_finite(const Matrix& a, const char* who) {
  if (a.dim() < 1) throw InvalidInput(std::string(who) + ": empty matrix");
  if (!a.finite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

}  // namespace

Matrix::Matrix(int n) : n_(n) { check_dim(n, "Matrix"); }

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> entries) {
  Matrix m(int(entries.size()));
  int i = 0;
  for (double d : entries) {
    m(i, i) = d;
    ++i;
  }
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(int(rows.size()));
  int i = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != m.dim()) throw InvalidInput("Matrix::from_rows: ragged rows");
    int j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

bool Matrix::finite() const {
  for (int i = 0; i < n_ * n_; ++i)
    if (!std::isfinite(e_[size_t(i)])) return false;
  return true;
}

Vec Matrix::apply(const Vec& v) const {
  Vec r = Vec::zeros(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

LogDet LogDet::singular() { return LogDet(0, -std::numeric_limits<double>::infinity()); }

double LogDet::value() const { return sign == 0 ? 0.0 : double(sign) * std::exp(log_magnitude); }

SingularSpectrum singular_values(const Matrix& a) {
  check_finite(a, "singular_values");
  const int n = a.dim();
  Matrix w = a;

  for (int sweep = 0; sweep < 64; ++sweep) {
    // convergence test on the implicit Gram matrix WᵀW
    double off2 = 0, frob2 = 0;
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        double g = 0;
        for (int i = 0; i < n; ++i) g += w(i, p) * w(i, q);
        frob2 += g * g;
        if (p != q) off2 += g * g;
      }
    }
    if (frob2 == 0.0 || std::sqrt(off2) < 1e-14 * std::sqrt(frob2)) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (int i = 0; i < n; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
      }
    }
  }

  SingularSpectrum spec;
  spec.values.resize(size_t(n));
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += w(i, j) * w(i, j);
    spec.values[size_t(j)] = std::sqrt(s);
  }
  std::sort(spec.values.begin(), spec.values.end(), std::greater<double>());
  return spec;
}

double operator_norm(const Matrix& a) { return singular_values(a).largest(); }

LogDet log_abs_det(const Matrix& a) {
  check_finite(a, "log_abs_det");
  const int n = a.dim();
  Matrix w = a;
  int sign = 1;
  double logmag = 0.0;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(w(i, k)) > std::abs(w(piv, k))) piv = i;
    if (w(piv, k) == 0.0) return LogDet::singular();
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(w(piv, j), w(k, j));
      sign = -sign;
    }
    const double pivot = w(k, k);
    if (pivot < 0) sign = -sign;
    logmag += std::log(std::abs(pivot));
    for (int i = k + 1; i < n; ++i) {
      const double f = w(i, k) / pivot;
      for (int j = k; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return LogDet(sign, logmag);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("matmul: dimension mismatch");
  const int n = a.dim();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

Matrix transpose(const Matrix& a) {
  const int n = a.dim();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(j, i);
  return r;
}

Vec solve(const Matrix& a, const Vec& b) {
  check_finite(a, "solve");
  if (a.dim() != b.dim()) throw InvalidInput("solve: dimension mismatch");
  const int n = a.dim();
  Matrix w = a;
  Vec r = b;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(w(i, k)) > std::abs(w(piv, k))) piv = i;
    if (w(piv, k) == 0.0) throw InvalidInput("solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(w(piv, j), w(k, j));
      std::swap(r[piv], r[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = w(i, k) / w(k, k);
      for (int j = k; j < n; ++j) w(i, j) -= f * w(k, j);
      r[i] -= f * r[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (int j = i + 1; j < n; ++j) s -= w(i, j) * r[j];
    r[i] = s / w(i, i);
  }
  return r;
}

}  // namespace invdim
