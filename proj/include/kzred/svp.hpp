#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "kzred/linalg.hpp"
#include "kzred/lll.hpp"
#include "kzred/matrix.hpp"

namespace kzred {

// Schnorr-Euchner enumeration flavours.
//   Original - full zig-zag at every level.
//   Dkwz     - top level restricted to z_n >= 0.
//   Improved - at any level whose tail z_{k+1:n} is zero, only z_k >= 0 is
//              explored (z_k = 0 just descends; the leaf needs z_1 > 0).
enum class SearchVariant { Original, Dkwz, Improved };

inline std::string_view to_string(SearchVariant v) {
  switch (v) {
    case SearchVariant::Original: return "se-original";
    case SearchVariant::Dkwz: return "se-dkwz";
    case SearchVariant::Improved: return "se-improved";
  }
  return "?";
}

inline SearchVariant parse_search_variant(std::string_view s) {
  if (s == "original" || s == "se-original") return SearchVariant::Original;
  if (s == "dkwz" || s == "se-dkwz") return SearchVariant::Dkwz;
  if (s == "improved" || s == "se-improved") return SearchVariant::Improved;
  throw std::invalid_argument("unknown search variant: " + std::string(s));
}

struct SvpSolution {
  std::vector<std::int64_t> z;
  double norm = 0.0;
  FlopCounter counters;
};

namespace detail {

inline double residual_norm(const RealMatrix& r, std::size_t k0,
                            const std::vector<std::int64_t>& z) {
  const std::size_t m = r.cols() - k0;
  long double sum = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    long double row = 0.0L;
    for (std::size_t j = i; j < m; ++j) row += r(k0 + i, k0 + j) * static_cast<long double>(z[j]);
    sum += row * row;
  }
  return static_cast<double>(std::sqrt(sum));
}

// Depth-first nearest-first enumeration on the trailing block R[k0:, k0:].
// Starts from the candidate e_1 with squared radius r_11^2 and only accepts
// strict improvements.
inline SvpSolution se_enumerate(const RealMatrix& r, std::size_t k0, SearchVariant variant) {
  const std::size_t m = r.cols() - k0;
  if (m == 0) throw std::invalid_argument("se_enumerate: empty block");
  auto R = [&](std::size_t i, std::size_t j) { return r(k0 + i, k0 + j); };

  SvpSolution out;
  FlopCounter& cnt = out.counters;

  std::vector<double> z(m, 0.0), center(m, 0.0), step(m, 0.0), dist(m + 1, 0.0);
  std::vector<char> monotone(m, 0), tail_zero(m, 0);
  std::vector<double> best(m, 0.0);
  best[0] = 1.0;
  double radius2 = R(0, 0) * R(0, 0);
  ++cnt.flops;

  auto init_level = [&](std::size_t lv) {
    tail_zero[lv] = lv + 1 == m ? 1 : (tail_zero[lv + 1] && z[lv + 1] == 0.0);
    if (tail_zero[lv]) {
      center[lv] = 0.0;
      const bool positive_only =
          variant == SearchVariant::Improved || (variant == SearchVariant::Dkwz && lv + 1 == m);
      monotone[lv] = positive_only;
      if (positive_only) {
        z[lv] = lv == 0 ? 1.0 : 0.0;
        step[lv] = 1.0;
      } else if (lv == 0) {
        // zig-zag 0, 1, -1, 2, ... with the zero vector skipped
        z[lv] = 1.0;
        step[lv] = -2.0;
      } else {
        z[lv] = 0.0;
        step[lv] = 1.0;
      }
      return;
    }
    double s = 0.0;
    for (std::size_t j = lv + 1; j < m; ++j) s += R(lv, j) * z[j];
    center[lv] = -s / R(lv, lv);
    cnt.flops += 2 * (m - 1 - lv) + 1;
    monotone[lv] = 0;
    z[lv] = round_tie_small_real(center[lv]);
    step[lv] = center[lv] - z[lv] >= 0.0 ? 1.0 : -1.0;
  };

  auto advance = [&](std::size_t lv) {
    if (monotone[lv]) {
      z[lv] += 1.0;
    } else {
      z[lv] += step[lv];
      step[lv] = -step[lv] - (step[lv] > 0.0 ? 1.0 : -1.0);
    }
  };

  std::size_t lv = m - 1;
  init_level(lv);
  while (true) {
    const double diff = (z[lv] - center[lv]) * R(lv, lv);
    const double nd = dist[lv + 1] + diff * diff;
    cnt.flops += 4;
    ++cnt.nodes;
    if (nd < radius2) {
      if (lv == 0) {
        radius2 = nd;
        best = z;
        ++lv;
        if (lv >= m) break;
        advance(lv);
      } else {
        dist[lv] = nd;
        --lv;
        init_level(lv);
      }
    } else {
      ++lv;
      if (lv >= m) break;
      advance(lv);
    }
  }

  out.z.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.z[i] = static_cast<std::int64_t>(best[i]);
  out.norm = residual_norm(r, k0, out.z);
  return out;
}

}  // namespace detail

inline SvpSolution se_search(const UpperTriangular& r, SearchVariant variant) {
  return detail::se_enumerate(r.matrix(), 0, variant);
}

inline SvpSolution se_search_original(const UpperTriangular& r) {
  return se_search(r, SearchVariant::Original);
}
inline SvpSolution se_search_dkwz(const UpperTriangular& r) {
  return se_search(r, SearchVariant::Dkwz);
}
inline SvpSolution se_search_improved(const UpperTriangular& r) {
  return se_search(r, SearchVariant::Improved);
}

struct LllAidedSolution {
  SvpSolution reduced;     // z in LLL-reduced coordinates
  std::vector<Integer> x;  // x = Zhat z, original coordinates
  ReducedBasis lll;        // Rhat, Zhat
  double norm = 0.0;       // ||R x|| = ||Rhat z||
};

inline LllAidedSolution lll_aided_svp(const UpperTriangular& r, const LLLParams& params,
                                      SearchVariant variant, Monitor& mon) {
  LllAidedSolution out;
  out.lll = lll_reduce(r, params, mon);
  out.reduced = se_search(out.lll.r, variant);
  mon.counter += out.reduced.counters;
  std::vector<Integer> zi(out.reduced.z.begin(), out.reduced.z.end());
  out.x = multiply(out.lll.z, std::span<const Integer>(zi));
  for (const Integer& v : out.x) mon.check(v, "SVP solution mapping");
  out.norm = out.reduced.norm;
  return out;
}

inline LllAidedSolution lll_aided_svp(const UpperTriangular& r, const LLLParams& params = {},
                                      SearchVariant variant = SearchVariant::Improved) {
  Monitor mon;
  return lll_aided_svp(r, params, variant, mon);
}

}  // namespace kzred
