#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kzred/errors.hpp"
#include "kzred/linalg.hpp"
#include "kzred/matrix.hpp"

namespace kzred {

struct ExtGcdResult {
  Integer d;  // gcd(p, q) > 0
  Integer a;  // a p + b q = d
  Integer b;
  unsigned iterations = 0;
};

// Extended Euclid on |p|, |q| with signs folded back into (a, b). The
// remainder-sequence cofactors are the minimal Bezout pair.
inline ExtGcdResult ext_gcd(const Integer& p, const Integer& q) {
  if (p == 0 && q == 0) throw BothZero("ext_gcd: p = q = 0");
  Integer old_r = abs(p), r = abs(q);
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  unsigned it = 0;
  while (r != 0) {
    const Integer quo = old_r / r;
    Integer tmp = old_r - quo * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quo * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quo * t;
    old_t = t;
    t = tmp;
    ++it;
  }
  ExtGcdResult out;
  out.d = old_r;
  out.a = p < 0 ? Integer(-old_s) : old_s;
  out.b = q < 0 ? Integer(-old_t) : old_t;
  out.iterations = it;
  return out;
}

// U = [p/d, -b; q/d, a], det U = 1, U^{-1} (p, q)^T = (d, 0)^T.
inline IntMatrix unimodular_pair(const Integer& p, const Integer& q) {
  const ExtGcdResult g = ext_gcd(p, q);
  IntMatrix u(2, 2);
  u(0, 0) = p / g.d;
  u(0, 1) = -g.b;
  u(1, 0) = q / g.d;
  u(1, 1) = g.a;
  return u;
}

struct ExpansionStats {
  std::size_t passes = 0;          // unimodular/Givens passes executed
  std::size_t gcd_calls = 0;
  std::size_t gcd_iterations = 0;

  ExpansionStats& operator+=(const ExpansionStats& o) {
    passes += o.passes;
    gcd_calls += o.gcd_calls;
    gcd_iterations += o.gcd_iterations;
    return *this;
  }
};

namespace detail {

// Eliminates x from its last entry to its second one. Each pass multiplies
// columns (k+t, k+t+1) of R and Z by U and re-triangularizes rows
// (k+t, k+t+1) of R with one Givens rotation. With skip_zero_tail, a pass
// whose lower entry is zero is skipped outright.
inline void expand_basis(RealMatrix& r, IntMatrix& z, std::size_t k, std::vector<Integer> x,
                         bool skip_zero_tail, Monitor& mon, ExpansionStats& stats) {
  const std::size_t n = r.cols();
  if (k >= n || x.size() != n - k) {
    throw std::invalid_argument("basis expansion: vector length must equal n - k");
  }
  const std::size_t m = x.size();
  for (std::size_t t = m - 1; t-- > 0;) {
    const Integer p = x[t];
    const Integer q = x[t + 1];
    if (q == 0) {
      if (skip_zero_tail) continue;
      if (p == 0) {
        // gcd(0, 0): identity pass, nothing to eliminate.
        ++stats.passes;
        continue;
      }
    }
    const ExtGcdResult g = ext_gcd(p, q);
    ++stats.gcd_calls;
    stats.gcd_iterations += g.iterations;
    const Integer u00 = p / g.d, u01 = -g.b, u10 = q / g.d, u11 = g.a;
    for (const Integer* u : {&u00, &u01, &u10, &u11}) mon.check(*u, "basis expansion U");

    const std::size_t j0 = k + t, j1 = k + t + 1;
    for (std::size_t row = 0; row < z.rows(); ++row) {
      const Integer a = z(row, j0), b = z(row, j1);
      z(row, j0) = a * u00 + b * u10;
      z(row, j1) = a * u01 + b * u11;
      mon.check(z(row, j0), "basis expansion Z");
      mon.check(z(row, j1), "basis expansion Z");
    }

    const double d00 = u00.convert_to<double>(), d01 = u01.convert_to<double>();
    const double d10 = u10.convert_to<double>(), d11 = u11.convert_to<double>();
    for (std::size_t row = 0; row <= j1; ++row) {
      const double a = r(row, j0), b = r(row, j1);
      r(row, j0) = a * d00 + b * d10;
      r(row, j1) = a * d01 + b * d11;
    }
    mon.counter.flops += 6 * (j1 + 1);

    const GivensRotation gr = givens_pair(r(j0, j0), r(j1, j0));
    mon.counter.flops += 6;
    apply_givens_rows(r, gr, j0, j1, j0, &mon.counter);
    r(j1, j0) = 0.0;

    x[t] = g.d;
    ++stats.passes;
  }
  if (abs(x[0]) != 1) {
    throw std::invalid_argument("basis expansion: vector is not primitive (gcd != 1)");
  }
}

}  // namespace detail

inline ExpansionStats basis_expand_zqw(UpperTriangular& r, UnimodularMatrix& z, std::size_t k,
                                       std::span<const Integer> x, Monitor& mon) {
  ExpansionStats st;
  detail::expand_basis(r.mutable_matrix(), z, k, {x.begin(), x.end()}, false, mon, st);
  return st;
}

inline ExpansionStats basis_expand_zqw(UpperTriangular& r, UnimodularMatrix& z, std::size_t k,
                                       std::span<const Integer> x) {
  Monitor mon;
  return basis_expand_zqw(r, z, k, x, mon);
}

inline ExpansionStats basis_expand_improved(UpperTriangular& r, UnimodularMatrix& z,
                                            std::size_t k, std::span<const Integer> zvec,
                                            Monitor& mon) {
  ExpansionStats st;
  detail::expand_basis(r.mutable_matrix(), z, k, {zvec.begin(), zvec.end()}, true, mon, st);
  return st;
}

inline ExpansionStats basis_expand_improved(UpperTriangular& r, UnimodularMatrix& z,
                                            std::size_t k, std::span<const Integer> zvec) {
  Monitor mon;
  return basis_expand_improved(r, z, k, zvec, mon);
}

}  // namespace kzred
