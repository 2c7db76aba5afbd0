#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "kzred/errors.hpp"
#include "kzred/linalg.hpp"
#include "kzred/matrix.hpp"

namespace kzred {

inline constexpr double kLovaszSlack = 1e-12;
inline constexpr double kSizeTieTolerance = 1e-12;

struct LLLParams {
  double delta = 0.99;
  std::uint64_t max_swaps = 10'000'000;

  void validate() const {
    if (!(delta > 0.25 && delta <= 1.0)) {
      throw DomainError("LLLParams: delta must satisfy 1/4 < delta <= 1");
    }
  }
};

// Q^T R_in Z = r.
struct ReducedBasis {
  UpperTriangular r;
  UnimodularMatrix z;
};

namespace detail {

// Column j -= mu * column i, on R (rows 0..i) and on Z. mu = round(r_ij/r_ii).
inline void size_reduce_entry(RealMatrix& r, IntMatrix& z, std::size_t i, std::size_t j,
                              Monitor& mon) {
  const double mu = round_tie_small_real(r(i, j) / r(i, i));
  ++mon.counter.flops;
  if (mu == 0.0) return;
  for (std::size_t row = 0; row <= i; ++row) r(row, j) -= mu * r(row, i);
  mon.counter.flops += 2 * (i + 1);
  const Integer m(mu);
  for (std::size_t row = 0; row < z.rows(); ++row) {
    if (z(row, i) == 0) continue;
    z(row, j) -= m * z(row, i);
    mon.check(z(row, j), "size reduction");
  }
}

inline bool lovasz_violated(const RealMatrix& r, std::size_t i, double delta) {
  const double lhs = delta * r(i, i) * r(i, i);
  const double rhs = r(i, i + 1) * r(i, i + 1) + r(i + 1, i + 1) * r(i + 1, i + 1);
  return lhs > rhs * (1.0 + kLovaszSlack);
}

// LLL on the trailing block R[k:, k:]. Column operations touch all rows of R,
// so R[0:k, k:] picks up the block transform; Z's columns k: likewise.
inline void lll_reduce_block(RealMatrix& r, IntMatrix& z, std::size_t k,
                             const LLLParams& params, Monitor& mon) {
  params.validate();
  const std::size_t n = r.cols();
  if (n - k < 2) return;
  std::uint64_t swaps = 0;
  std::size_t j = k + 1;
  while (j < n) {
    size_reduce_entry(r, z, j - 1, j, mon);
    mon.counter.flops += 6;
    if (lovasz_violated(r, j - 1, params.delta)) {
      if (++swaps > params.max_swaps) {
        throw NonConvergence("lll_reduce: swap cap exceeded (" +
                             std::to_string(params.max_swaps) + ")");
      }
      r.swap_columns(j - 1, j);
      z.swap_columns(j - 1, j);
      const GivensRotation g = givens_pair(r(j - 1, j - 1), r(j, j - 1));
      mon.counter.flops += 6;
      apply_givens_rows(r, g, j - 1, j, j - 1, &mon.counter);
      r(j, j - 1) = 0.0;
      if (j > k + 1) --j;
    } else {
      for (std::size_t i = j - 1; i-- > k;) size_reduce_entry(r, z, i, j, mon);
      ++j;
    }
  }
}

inline void size_reduce_all(RealMatrix& r, IntMatrix& z, Monitor& mon) {
  const std::size_t n = r.cols();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = j; i-- > 0;) size_reduce_entry(r, z, i, j, mon);
}

}  // namespace detail

inline ReducedBasis lll_reduce(const UpperTriangular& r, const LLLParams& params,
                               Monitor& mon) {
  RealMatrix work = r.matrix();
  IntMatrix z = IntMatrix::identity(r.dim());
  detail::lll_reduce_block(work, z, 0, params, mon);
  return {UpperTriangular(std::move(work)), std::move(z)};
}

inline ReducedBasis lll_reduce(const UpperTriangular& r, const LLLParams& params = {}) {
  Monitor mon;
  return lll_reduce(r, params, mon);
}

// In-place full size reduction; diagonal of r is left untouched.
inline void size_reduce(UpperTriangular& r, UnimodularMatrix& z) {
  Monitor mon;
  detail::size_reduce_all(r.mutable_matrix(), z, mon);
}

inline bool is_size_reduced(const UpperTriangular& r) {
  const std::size_t n = r.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const double bound = 0.5 * std::abs(r(i, i)) + kSizeTieTolerance * std::abs(r(i, i));
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(r(i, j)) > bound) return false;
  }
  return true;
}

inline bool satisfies_lovasz(const UpperTriangular& r, double delta) {
  for (std::size_t i = 0; i + 1 < r.dim(); ++i)
    if (detail::lovasz_violated(r.matrix(), i, delta)) return false;
  return true;
}

inline bool is_lll_reduced(const UpperTriangular& r, const LLLParams& params = {}) {
  params.validate();
  return is_size_reduced(r) && satisfies_lovasz(r, params.delta);
}

}  // namespace kzred
