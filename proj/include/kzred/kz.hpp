#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "kzred/expand.hpp"
#include "kzred/linalg.hpp"
#include "kzred/lll.hpp"
#include "kzred/matrix.hpp"
#include "kzred/svp.hpp"

namespace kzred {

struct KzOptions {
  LLLParams lll;
  bool watchdog_53bit = false;
};

struct KzStats {
  FlopCounter counter;
  ExpansionStats expansion;
  std::size_t expansions = 0;       // steps that ran a basis expansion
  std::size_t fast_path_plus = 0;   // steps skipped because z = e_1
  std::size_t fast_path_minus = 0;  // steps skipped because z = -e_1
  // Per step: the SVP solution handed to the expansion (x for the baseline,
  // z in LLL-reduced coordinates for the improved pipeline).
  std::vector<std::vector<Integer>> inner_solutions;
  Integer max_abs_integer = 0;
};

struct KzResult {
  ReducedBasis basis;
  KzStats stats;
};

namespace detail {

inline int unit_sign(const std::vector<std::int64_t>& z) {
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i] != 0) return 0;
  return z[0] == 1 ? 1 : (z[0] == -1 ? -1 : 0);
}

}  // namespace detail

// Baseline: LLL-aided original Schnorr-Euchner per step, solution mapped
// back to the current coordinates and expanded there.
inline KzResult kz_reduce_zqw(const BasisMatrix& a, const KzOptions& opt = {}) {
  opt.lll.validate();
  Monitor mon;
  mon.watchdog_53bit = opt.watchdog_53bit;
  KzResult res;

  UpperTriangular r = qr_factorize(a, &mon.counter).r;
  UnimodularMatrix z = UnimodularMatrix::identity(a.cols());
  const std::size_t n = a.cols();

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const LllAidedSolution sol =
        lll_aided_svp(r.trailing(k), opt.lll, SearchVariant::Original, mon);
    res.stats.inner_solutions.push_back(sol.x);
    res.stats.expansion += basis_expand_zqw(r, z, k, sol.x, mon);
    ++res.stats.expansions;
  }
  detail::size_reduce_all(r.mutable_matrix(), z, mon);

  res.stats.counter = mon.counter;
  res.stats.max_abs_integer = mon.max_abs_integer;
  res.basis = {std::move(r), std::move(z)};
  return res;
}

// Improved pipeline: LLL on the trailing block folded into R and Z, improved
// enumeration on the reduced block, expansion of the reduced-coordinate
// solution with zero-tail passes skipped, and no expansion at all when the
// solution is +-e_1.
inline KzResult kz_reduce_improved(const BasisMatrix& a, const KzOptions& opt = {}) {
  opt.lll.validate();
  Monitor mon;
  mon.watchdog_53bit = opt.watchdog_53bit;
  KzResult res;

  UpperTriangular r = qr_factorize(a, &mon.counter).r;
  UnimodularMatrix z = UnimodularMatrix::identity(a.cols());
  const std::size_t n = a.cols();

  for (std::size_t k = 0; k + 1 < n; ++k) {
    detail::lll_reduce_block(r.mutable_matrix(), z, k, opt.lll, mon);
    SvpSolution sol = detail::se_enumerate(r.matrix(), k, SearchVariant::Improved);
    mon.counter += sol.counters;
    res.stats.inner_solutions.emplace_back(sol.z.begin(), sol.z.end());
    switch (detail::unit_sign(sol.z)) {
      case 1: ++res.stats.fast_path_plus; continue;
      case -1: ++res.stats.fast_path_minus; continue;
      default: break;
    }
    const std::vector<Integer>& zi = res.stats.inner_solutions.back();
    res.stats.expansion += basis_expand_improved(r, z, k, zi, mon);
    ++res.stats.expansions;
  }
  detail::size_reduce_all(r.mutable_matrix(), z, mon);

  res.stats.counter = mon.counter;
  res.stats.max_abs_integer = mon.max_abs_integer;
  res.basis = {std::move(r), std::move(z)};
  return res;
}

// Plain LLL of A's R-factor, for the `reduce --algorithm lll` path.
inline KzResult lll_reduce_basis(const BasisMatrix& a, const KzOptions& opt = {}) {
  Monitor mon;
  mon.watchdog_53bit = opt.watchdog_53bit;
  KzResult res;
  UpperTriangular r = qr_factorize(a, &mon.counter).r;
  res.basis = lll_reduce(r, opt.lll, mon);
  res.stats.counter = mon.counter;
  res.stats.max_abs_integer = mon.max_abs_integer;
  return res;
}

enum class ReductionAlgorithm { KzZqw, KzImproved, Lll };

inline ReductionAlgorithm parse_reduction_algorithm(std::string_view s) {
  if (s == "kz-zqw") return ReductionAlgorithm::KzZqw;
  if (s == "kz-improved") return ReductionAlgorithm::KzImproved;
  if (s == "lll") return ReductionAlgorithm::Lll;
  throw std::invalid_argument("unknown reduction algorithm: " + std::string(s));
}

inline std::string_view to_string(ReductionAlgorithm a) {
  switch (a) {
    case ReductionAlgorithm::KzZqw: return "kz-zqw";
    case ReductionAlgorithm::KzImproved: return "kz-improved";
    case ReductionAlgorithm::Lll: return "lll";
  }
  return "?";
}

inline KzResult reduce(const BasisMatrix& a, ReductionAlgorithm alg, const KzOptions& opt = {}) {
  switch (alg) {
    case ReductionAlgorithm::KzZqw: return kz_reduce_zqw(a, opt);
    case ReductionAlgorithm::KzImproved: return kz_reduce_improved(a, opt);
    case ReductionAlgorithm::Lll: return lll_reduce_basis(a, opt);
  }
  throw std::invalid_argument("reduce: bad algorithm");
}

}  // namespace kzred
