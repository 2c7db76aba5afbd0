#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kzred/errors.hpp"

namespace kzred {

using Integer = boost::multiprecision::cpp_int;

// Dense row-major matrix. Used with double for bases and R-factors and with
// Integer for unimodular transforms.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<T> values)
      : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) {
      throw std::invalid_argument("Matrix: initializer size mismatch");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const T> data() const { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Copy of rows [r0, r0+nr) x cols [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void swap_columns(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using IntMatrix = Matrix<Integer>;

// Exact integer matrix with |det| = 1 expected; unimodularity itself is
// certified by verify::exact_det.
using UnimodularMatrix = IntMatrix;

inline double max_abs(const RealMatrix& m) {
  double v = 0.0;
  for (double x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

inline RealMatrix to_real(const IntMatrix& z) {
  RealMatrix out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j)
      out(i, j) = z(i, j).template convert_to<double>();
  return out;
}

inline RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  RealMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  IntMatrix c(a.rows(), b.cols(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

// A * Z with Z exact: each column is accumulated in long double from the
// exact integer entries.
inline RealMatrix multiply(const RealMatrix& a, const IntMatrix& z) {
  if (a.cols() != z.rows()) throw std::invalid_argument("multiply: shape mismatch");
  RealMatrix c(a.rows(), z.cols(), 0.0);
  for (std::size_t j = 0; j < z.cols(); ++j) {
    std::vector<long double> acc(a.rows(), 0.0L);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (z(k, j) == 0) continue;
      const long double zkj = z(k, j).convert_to<long double>();
      for (std::size_t i = 0; i < a.rows(); ++i) acc[i] += a(i, k) * zkj;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = static_cast<double>(acc[i]);
  }
  return c;
}

inline std::vector<Integer> multiply(const IntMatrix& z, std::span<const Integer> x) {
  if (z.cols() != x.size()) throw std::invalid_argument("multiply: shape mismatch");
  std::vector<Integer> y(z.rows(), Integer(0));
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j)
      if (x[j] != 0) y[i] += z(i, j) * x[j];
  return y;
}

// Validated R-factor: square, exactly zero below the diagonal, nonzero
// diagonal.
class UpperTriangular {
 public:
  UpperTriangular() = default;
  explicit UpperTriangular(RealMatrix m) : m_(std::move(m)) { validate(m_); }
  UpperTriangular(std::size_t n, std::initializer_list<double> values)
      : UpperTriangular(RealMatrix(n, n, values)) {}

  static UpperTriangular identity(std::size_t n) {
    return UpperTriangular(RealMatrix::identity(n));
  }

  static void validate(const RealMatrix& m) {
    if (!m.square() || m.rows() == 0) {
      throw std::invalid_argument("UpperTriangular: matrix must be square and nonempty");
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (m(i, j) != 0.0) {
          throw std::invalid_argument("UpperTriangular: nonzero entry below diagonal");
        }
      }
      if (m(i, i) == 0.0 || !std::isfinite(m(i, i))) {
        throw std::invalid_argument("UpperTriangular: singular diagonal");
      }
    }
  }

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const RealMatrix& matrix() const { return m_; }

  // Raw access for in-place algorithms. Callers keep the triangular shape.
  RealMatrix& mutable_matrix() { return m_; }

  // Trailing block R[k:, k:].
  UpperTriangular trailing(std::size_t k) const {
    return UpperTriangular(m_.block(k, k, dim() - k, dim() - k));
  }

 private:
  RealMatrix m_;
};

}  // namespace kzred
