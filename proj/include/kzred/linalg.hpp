#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "kzred/errors.hpp"
#include "kzred/matrix.hpp"

namespace kzred {

// Operation counts for one search or reduction. Each real +, -, *, /, sqrt
// is one flop; comparisons and index arithmetic are free. `nodes` counts
// enumeration-tree partial assignments whose partial norm was evaluated.
struct FlopCounter {
  std::uint64_t flops = 0;
  std::uint64_t nodes = 0;

  FlopCounter& operator+=(const FlopCounter& o) {
    flops += o.flops;
    nodes += o.nodes;
    return *this;
  }
};

inline constexpr double kRankTolerance = 1e-10;

// Lattice basis: m x n real, m >= n >= 1, full column rank.
class BasisMatrix {
 public:
  explicit BasisMatrix(RealMatrix a) : a_(std::move(a)) {
    if (a_.cols() == 0 || a_.rows() < a_.cols()) {
      throw std::invalid_argument("BasisMatrix: need rows >= cols >= 1");
    }
    for (double x : a_.data()) {
      if (!std::isfinite(x)) throw std::invalid_argument("BasisMatrix: non-finite entry");
    }
    Eigen::MatrixXd e(a_.rows(), a_.cols());
    for (std::size_t i = 0; i < a_.rows(); ++i)
      for (std::size_t j = 0; j < a_.cols(); ++j) e(i, j) = a_(i, j);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues();
    if (!(sv(sv.size() - 1) > kRankTolerance * sv(0))) {
      throw RankDeficient("BasisMatrix: numerical rank below column count");
    }
  }

  BasisMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values)
      : BasisMatrix(RealMatrix(rows, cols, values)) {}

  std::size_t rows() const { return a_.rows(); }
  std::size_t cols() const { return a_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }
  const RealMatrix& matrix() const { return a_; }

 private:
  RealMatrix a_;
};

struct QRFactors {
  RealMatrix q;  // m x n, orthonormal columns
  UpperTriangular r;
};

// Householder QR of an m x n matrix. No sign normalization of diag(R).
inline QRFactors qr_factorize(const RealMatrix& a, FlopCounter* counter = nullptr) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0 || m < n) throw std::invalid_argument("qr_factorize: need rows >= cols >= 1");

  RealMatrix w = a;
  std::vector<std::vector<double>> reflectors(n);
  std::vector<double> betas(n, 0.0);
  std::uint64_t flops = 0;

  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) norm2 += w(i, k) * w(i, k);
    flops += 2 * (m - k);
    const double norm = std::sqrt(norm2);
    ++flops;
    std::vector<double>& v = reflectors[k];
    v.assign(m - k, 0.0);
    if (norm == 0.0) continue;
    const double alpha = w(k, k) >= 0.0 ? -norm : norm;
    for (std::size_t i = k; i < m; ++i) v[i - k] = w(i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    flops += 1 + 2 * v.size();
    if (vnorm2 == 0.0) continue;
    betas[k] = 2.0 / vnorm2;
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * w(i, j);
      dot *= betas[k];
      for (std::size_t i = k; i < m; ++i) w(i, j) -= dot * v[i - k];
      flops += 4 * (m - k) + 1;
    }
  }

  RealMatrix r(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = w(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    if (r(i, i) == 0.0) throw RankDeficient("qr_factorize: zero diagonal in R");
  }

  // Thin Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
  RealMatrix q(m, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    if (betas[kk] == 0.0) continue;
    const std::vector<double>& v = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = kk; i < m; ++i) dot += v[i - kk] * q(i, j);
      dot *= betas[kk];
      for (std::size_t i = kk; i < m; ++i) q(i, j) -= dot * v[i - kk];
    }
  }

  if (counter) counter->flops += flops;
  return {std::move(q), UpperTriangular(std::move(r))};
}

inline QRFactors qr_factorize(const BasisMatrix& a, FlopCounter* counter = nullptr) {
  return qr_factorize(a.matrix(), counter);
}

struct GivensRotation {
  double c = 1.0;
  double s = 0.0;
  double r = 0.0;
};

// [c s; -s c] [a; b] = [r; 0].
inline GivensRotation givens_pair(double a, double b) {
  if (a == 0.0 && b == 0.0) throw DegenerateRotation("givens_pair: both inputs are zero");
  if (b == 0.0) return {1.0, 0.0, a};
  if (a == 0.0) return {0.0, 1.0, b};
  const double r = std::hypot(a, b);
  return {a / r, b / r, r};
}

// Applies G to rows (i, j) of m over columns [from, cols).
inline void apply_givens_rows(RealMatrix& m, const GivensRotation& g, std::size_t i,
                              std::size_t j, std::size_t from,
                              FlopCounter* counter = nullptr) {
  for (std::size_t col = from; col < m.cols(); ++col) {
    const double x = m(i, col);
    const double y = m(j, col);
    m(i, col) = g.c * x + g.s * y;
    m(j, col) = -g.s * x + g.c * y;
  }
  if (counter) counter->flops += 6 * (m.cols() - from);
}

// Nearest integer (as a double); exact .5 ties go to the smaller magnitude.
inline double round_tie_small_real(double x) {
  const double t = std::trunc(x);
  const double frac = std::abs(x - t);
  if (frac == 0.5) return t;
  return std::round(x);
}

inline std::int64_t round_tie_small(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("round_tie_small: non-finite input");
  const double r = round_tie_small_real(x);
  if (std::abs(r) >= 9.2e18) throw std::overflow_error("round_tie_small: out of int64 range");
  return static_cast<std::int64_t>(r);
}

// 2^53: beyond this magnitude consecutive integers are not all representable
// as doubles.
inline const Integer kFlintLimit = Integer(1) << 53;

// Per-reduction instrumentation: flop/node counts plus the optional 53-bit
// watchdog over integer entries.
struct Monitor {
  FlopCounter counter;
  bool watchdog_53bit = false;
  bool watchdog_fired = false;
  Integer max_abs_integer = 0;

  void check(const Integer& v, const char* where) {
    const Integer mag = abs(v);
    if (mag > max_abs_integer) max_abs_integer = mag;
    if (watchdog_53bit && mag > kFlintLimit) {
      watchdog_fired = true;
      throw OverflowWatch(std::string("integer entry exceeds 2^53 in ") + where);
    }
  }
};

}  // namespace kzred
