#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace fermidet {

using cdouble = std::complex<double>;

/// Dense column-major complex matrix, sized for the small determinants
/// used throughout (n <= ~12).
class CMatrix {
public:
  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cdouble& operator()(int i, int j) { return a_[static_cast<size_t>(j) * rows_ + i]; }
  const cdouble& operator()(int i, int j) const { return a_[static_cast<size_t>(j) * rows_ + i]; }

private:
  int rows_, cols_;
  std::vector<cdouble> a_;
};

/// Determinant by LU with partial pivoting on magnitude.
inline cdouble lu_det(CMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("lu_det: matrix not square");
  const int n = m.rows();
  cdouble det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      cdouble f = m(i, k) / m(k, k);
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

inline double vec_norm(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// Bilinear pairing a(v) = sum_i a_i v_i (duality, no conjugation).
inline cdouble bilinear(const std::vector<cdouble>& a, const std::vector<cdouble>& v) {
  if (a.size() != v.size()) throw std::invalid_argument("bilinear: dimension mismatch");
  cdouble s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * v[i];
  return s;
}

/// Hermitian inner product <a,b> = sum_i conj(a_i) b_i.
inline cdouble hermitian(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hermitian: dimension mismatch");
  cdouble s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: bad input");
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace fermidet
