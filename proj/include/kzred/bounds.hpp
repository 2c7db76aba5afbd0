#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "kzred/errors.hpp"
#include "kzred/matrix.hpp"

// Closed-form bounds on KZ-reduced bases and related constants.
namespace kzred::bounds {

// Which formula produced a tabulated value.
struct BoundReport {
  int n = 0;
  double value = 0.0;
  std::string formula_id;
};

inline void require_positive(int n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + ": n must be >= 1");
}

// Known exact Hermite constants gamma_n.
inline double hermite_exact(int n) {
  switch (n) {
    case 1: return 1.0;
    case 2: return 2.0 / std::sqrt(3.0);
    case 3: return std::cbrt(2.0);
    case 4: return std::sqrt(2.0);
    case 5: return std::pow(8.0, 1.0 / 5.0);
    case 6: return std::pow(64.0 / 3.0, 1.0 / 6.0);
    case 7: return std::pow(64.0, 1.0 / 7.0);
    case 8: return 2.0;
    case 24: return 4.0;
    default: throw Unknown("hermite_exact: gamma_" + std::to_string(n) + " is not known");
  }
}

inline bool hermite_known(int n) { return (n >= 1 && n <= 8) || n == 24; }

// gamma_n < n/8 + 6/5 for all n >= 1.
inline double hermite_linear_bound(int n) {
  require_positive(n, "hermite_linear_bound");
  return n / 8.0 + 6.0 / 5.0;
}

// (2/pi) Gamma(2 + n/2)^{2/n}, via lgamma.
inline double blichfeldt_bound(int n) {
  require_positive(n, "blichfeldt_bound");
  return (2.0 / std::numbers::pi) * std::exp((2.0 / n) * std::lgamma(2.0 + n / 2.0));
}

inline double neu17_linear_bound(int n) {
  if (n < 3) throw DomainError("neu17_linear_bound: requires n >= 3");
  return n / 7.0 + 6.0 / 7.0;
}

// ((n-1)/8)^{ln((n-1)/8)/2}, the super-polynomial factor shared by f and g.
inline double superpoly_factor(int n) {
  const double t = (n - 1) / 8.0;
  return std::pow(t, 0.5 * std::log(t));
}

// f(n): upper bound on the KZ constant alpha_n.
inline double kz_constant_bound(int n) {
  require_positive(n, "kz_constant_bound");
  const double s3 = std::sqrt(3.0);
  switch (n) {
    case 1: return 1.0;
    case 2: return 4.0 / 3.0;
    case 3: return std::pow(2.0, 1.5) / s3;
    case 4: return std::pow(2.0, 11.0 / 6.0) / s3;
    case 5: return std::pow(2.0, 25.0 / 12.0) / s3;
    case 6: return std::pow(2.0, 161.0 / 60.0) / std::pow(3.0, 7.0 / 10.0);
    case 7: return std::pow(2.0, 161.0 / 60.0) / std::pow(3.0, 8.0 / 15.0);
    case 8: return std::pow(2.0, 1227.0 / 420.0) / std::pow(3.0, 8.0 / 15.0);
    default: break;
  }
  return 7.0 * hermite_linear_bound(n) * superpoly_factor(n);
}

inline double hanrot_stehle_bound(int n) {
  if (n < 2) throw DomainError("hanrot_stehle_bound: requires n >= 2");
  double log_prod = 0.0;
  for (int k = 2; k <= n; ++k) log_prod += std::log(static_cast<double>(k)) / (k - 1);
  return n * std::exp(log_prod);
}

// Printed 3-digit values of g(1..8).
inline constexpr std::array<double, 8> kColumnRatioTable = {1.0,  1.34, 1.75, 2.27,
                                                            2.89, 3.64, 4.54, 5.60};

enum class ColumnRatioMode {
  Printed,    // tabulated roundings for i <= 8
  PartialSum  // 1 + (1/4) sum_{k=2}^{i} f(k) for i <= 8
};

// g(i): ||R_{1:i,i}||^2 <= g(i) r_ii^2 for KZ-reduced R.
inline double column_ratio_bound(int i, ColumnRatioMode mode = ColumnRatioMode::Printed) {
  require_positive(i, "column_ratio_bound");
  if (i <= 8) {
    if (mode == ColumnRatioMode::Printed) return kColumnRatioTable[i - 1];
    double s = 0.0;
    for (int k = 2; k <= i; ++k) s += kz_constant_bound(k);
    return 1.0 + 0.25 * s;
  }
  return 5.6 + 7.0 * (i - 8) * (5.0 * i + 141.0) / 320.0 * superpoly_factor(i);
}

// h(n) = gamma_n^{n/2} with known gamma for n <= 8, the linear bound beyond.
inline double od_factor(int n) {
  require_positive(n, "od_factor");
  const double s3 = std::sqrt(3.0);
  switch (n) {
    case 1: return 1.0;
    case 2: return 2.0 / s3;
    case 3: return std::sqrt(2.0);
    case 4: return 2.0;
    case 5: return std::sqrt(8.0);
    case 6: return 8.0 / s3;
    case 7: return 8.0;
    case 8: return 16.0;
    default: break;
  }
  return std::pow(hermite_linear_bound(n), n / 2.0);
}

// prod_{i=1}^{count} sqrt(i+3)/2
inline double lagarias_product(int count) {
  double log_p = 0.0;
  for (int i = 1; i <= count; ++i) log_p += 0.5 * std::log(i + 3.0) - std::log(2.0);
  return std::exp(log_p);
}

// Upper bound on the orthogonality defect of a KZ-reduced basis.
inline double od_bound(int n) {
  return od_factor(n) * lagarias_product(n);
}

// Prior bounds for boosted-KZ bases, kept for comparison.
inline double boosted_first_column_bound(int i) {
  if (i < 2) throw DomainError("boosted_first_column_bound: requires i >= 2");
  const double t = i - 1.0;
  return 8.0 * i / 9.0 * std::pow(t, std::log(t) / 2.0);
}

inline double boosted_column_bound(int i) {
  if (i < 2) throw DomainError("boosted_column_bound: requires i >= 2");
  const double t = i - 1.0;
  return 1.0 + 2.0 * i / 9.0 * std::pow(t, 1.0 + std::log(t) / 2.0);
}

// Below 1 (hence vacuous) for n <= 2.
inline double boosted_od_bound(int n) {
  require_positive(n, "boosted_od_bound");
  return std::sqrt(static_cast<double>(n)) / 2.0 * lagarias_product(n - 1) *
         std::pow(2.0 * n / 3.0, n / 2.0);
}

inline void require_delta(double delta) {
  if (!(delta > 0.25 && delta <= 1.0)) throw DomainError("delta must satisfy 1/4 < delta <= 1");
}

// alpha = 2 / sqrt(4 delta - 1): bound on adjacent diagonal ratios of an
// LLL-reduced R.
inline double lll_diag_ratio(double delta) {
  require_delta(delta);
  return 2.0 / std::sqrt(4.0 * delta - 1.0);
}

// The square-root factor of the entry bound,
//   sqrt((1 - 2a^2 - (3a/2)^{2(n-i+1)}/9) / (1 - (3a/2)^2)),
// evaluated as 1 + (a^2/4)(1 - u^{n-i})/(1 - u) with u = (3a/2)^2, which is
// the same quantity but makes the i = n value exactly 1.
inline double svp_entry_sqrt_factor(int n, int i, double delta) {
  const double alpha = lll_diag_ratio(delta);
  const double u = 2.25 * alpha * alpha;
  const double geom = (1.0 - std::pow(u, n - i)) / (1.0 - u);
  return std::sqrt(1.0 + 0.25 * alpha * alpha * geom);
}

// Bound on |z_i| for any SVP solution on an LLL-reduced R (1-based i).
inline double svp_entry_bound(int n, int i, double delta) {
  if (n < 1 || i < 1 || i > n) throw DomainError("svp_entry_bound: need 1 <= i <= n");
  const double alpha = lll_diag_ratio(delta);
  return svp_entry_sqrt_factor(n, i, delta) * std::pow(alpha, i - 1);
}

// Upper bound U on |Rhat^{-1}| for size-reduced R with unit diagonal.
inline RealMatrix lemma1_envelope(int n) {
  require_positive(n, "lemma1_envelope");
  RealMatrix u(n, n, 0.0);
  for (int i = 0; i < n; ++i) {
    u(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) u(i, j) = 0.5 * std::pow(1.5, j - i - 1);
  }
  return u;
}

enum class RemarkKind { LllSicRadius, KzSicRadius, ProxSic, ProxZf };

inline RemarkKind parse_remark_kind(std::string_view s) {
  if (s == "lll_sic_radius") return RemarkKind::LllSicRadius;
  if (s == "kz_sic_radius") return RemarkKind::KzSicRadius;
  if (s == "prox_sic") return RemarkKind::ProxSic;
  if (s == "prox_zf") return RemarkKind::ProxZf;
  throw DomainError("unknown remark kind: " + std::string(s));
}

// Decoding-radius lower bounds and proximity-factor upper bounds.
inline double remark_bounds(RemarkKind kind, int n, double lambda = 1.0, double delta = 0.99) {
  require_positive(n, "remark_bounds");
  switch (kind) {
    case RemarkKind::LllSicRadius: {
      if (n < 2) throw DomainError("lll_sic_radius: requires n >= 2");
      require_delta(delta);
      if (!(lambda > 0.0)) throw DomainError("lll_sic_radius: lambda must be positive");
      const double num = lambda * std::pow(delta - 0.25, (n - 1) / 4.0);
      if (n <= 8) return num / (2.0 * std::sqrt(2.0));
      return num / (2.0 * std::sqrt((5.0 * n + 48.0) / 40.0));
    }
    case RemarkKind::KzSicRadius:
      if (!(lambda > 0.0)) throw DomainError("kz_sic_radius: lambda must be positive");
      return lambda / (2.0 * std::sqrt(kz_constant_bound(n)));
    case RemarkKind::ProxSic:
      return kz_constant_bound(n);
    case RemarkKind::ProxZf:
      return 1.0 + 0.2 * (std::pow(2.25, n - 1) - 1.0) * kz_constant_bound(n);
  }
  throw DomainError("remark_bounds: bad kind");
}

enum class Table { Hermite, F, G, H, Thm5, Ratio };

inline Table parse_table(std::string_view s) {
  if (s == "hermite") return Table::Hermite;
  if (s == "f") return Table::F;
  if (s == "g") return Table::G;
  if (s == "h") return Table::H;
  if (s == "thm5") return Table::Thm5;
  if (s == "ratio") return Table::Ratio;
  throw DomainError("unknown table: " + std::string(s));
}

}  // namespace kzred::bounds
