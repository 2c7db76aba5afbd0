#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "kzred/errors.hpp"
#include "kzred/linalg.hpp"
#include "kzred/lll.hpp"
#include "kzred/matrix.hpp"
#include "kzred/svp.hpp"

namespace kzred {

inline constexpr std::size_t kCertificateCap = 14;
inline constexpr double kCertificateTolerance = 1e-9;

// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer exact_det(const IntMatrix& z) {
  if (!z.square()) throw std::invalid_argument("exact_det: matrix must be square");
  const std::size_t n = z.rows();
  if (n == 0) return 1;
  IntMatrix m = z;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : Integer(-m(n - 1, n - 1));
}

// Alias kept for callers that only care about +-1 versus anything else.
inline Integer exact_det_sign(const UnimodularMatrix& z) { return exact_det(z); }

// prod ||a_i|| / sqrt(det(A^T A)), evaluated in log space.
inline double orthogonality_defect(const BasisMatrix& a) {
  const UpperTriangular r = qr_factorize(a).r;
  double log_xi = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    log_xi += 0.5 * std::log(s) - std::log(std::abs(r(j, j)));
  }
  return std::exp(log_xi);
}

// Exhaustive min ||A x|| over nonzero x with ||x||_inf <= box. Correct only
// when box covers every coordinate of some shortest vector.
inline double brute_force_lambda(const RealMatrix& a, int box) {
  const std::size_t n = a.cols();
  if (n > 8) throw DimensionTooLarge("brute_force_lambda: n > 8");
  if (box < 1) throw std::invalid_argument("brute_force_lambda: box must be >= 1");
  std::vector<int> x(n, -box);
  double best2 = INFINITY;
  std::vector<double> ax(a.rows());
  while (true) {
    bool nonzero = false;
    for (int v : x) nonzero |= v != 0;
    if (nonzero) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
        s += acc * acc;
      }
      best2 = std::min(best2, s);
    }
    std::size_t p = 0;
    while (p < n && x[p] == box) x[p++] = -box;
    if (p == n) break;
    ++x[p];
  }
  return std::sqrt(best2);
}

struct ReductionCertificate {
  double delta = 0.99;
  bool size_reduced = false;
  bool lovasz = false;
  bool kz_condition = false;
  bool unimodular = false;
  bool reconstruction_ok = false;

  std::vector<bool> kz_per_index;
  std::vector<double> diag_abs;          // |r_ii|
  std::vector<double> enumerated_norms;  // lambda of R[i:, i:]
  Integer det_z = 0;
  double reconstruction_error = INFINITY;  // relative to max |r_ij|
  std::vector<std::string> notes;

  bool all_pass() const {
    return size_reduced && lovasz && kz_condition && unimodular && reconstruction_ok;
  }
};

// Row-scales r so the diagonal is positive.
inline RealMatrix sign_normalized(const RealMatrix& r) {
  RealMatrix out = r;
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (r(i, i) < 0.0)
      for (std::size_t j = 0; j < r.cols(); ++j) out(i, j) = -out(i, j);
  return out;
}

// max |S1 r1 - S2 r2| / max |r1| with S the diagonal sign normalizers.
inline double r_factor_distance(const RealMatrix& r1, const RealMatrix& r2) {
  const RealMatrix a = sign_normalized(r1), b = sign_normalized(r2);
  double err = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) err = std::max(err, std::abs(a(i, j) - b(i, j)));
  return err / max_abs(r1);
}

// Certifies r, z against the definitions: size reduction, Lovasz at delta,
// per-index shortest-vector condition by an independent original-variant
// enumeration, exact |det z| = 1 and QR(A z) ~ r up to row signs.
inline ReductionCertificate assert_kz_reduced(const UpperTriangular& r,
                                              const UnimodularMatrix& z,
                                              const BasisMatrix& a, double delta,
                                              std::size_t cap = kCertificateCap) {
  const std::size_t n = r.dim();
  if (n > cap) {
    throw DimensionTooLarge("assert_kz_reduced: n = " + std::to_string(n) +
                            " exceeds certificate cap " + std::to_string(cap));
  }
  if (z.rows() != n || z.cols() != n || a.cols() != n) {
    throw std::invalid_argument("assert_kz_reduced: dimension mismatch");
  }
  ReductionCertificate c;
  c.delta = delta;
  c.size_reduced = is_size_reduced(r);
  c.lovasz = satisfies_lovasz(r, delta);

  c.kz_condition = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double rii = std::abs(r(i, i));
    const double lambda = se_search_original(r.trailing(i)).norm;
    const bool ok = rii - lambda <= kCertificateTolerance * lambda;
    c.diag_abs.push_back(rii);
    c.enumerated_norms.push_back(lambda);
    c.kz_per_index.push_back(ok);
    if (!ok) {
      c.kz_condition = false;
      c.notes.push_back("index " + std::to_string(i + 1) + ": |r_ii| exceeds lambda of trailing block");
    }
  }

  c.det_z = exact_det(z);
  c.unimodular = abs(c.det_z) == 1;
  if (!c.unimodular) c.notes.push_back("det Z = " + c.det_z.str());

  try {
    const RealMatrix az = multiply(a.matrix(), z);
    const RealMatrix r2 = qr_factorize(az).r.matrix();
    c.reconstruction_error = r_factor_distance(r.matrix(), r2);
    c.reconstruction_ok = c.reconstruction_error <= kCertificateTolerance;
  } catch (const Error& e) {
    c.reconstruction_ok = false;
    c.notes.push_back(std::string("reconstruction: ") + e.what());
  }
  if (!c.reconstruction_ok) c.notes.push_back("QR(A Z) does not reproduce R");
  return c;
}

}  // namespace kzred
