#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "kzred/bounds.hpp"
#include "kzred/errors.hpp"
#include "kzred/kz.hpp"
#include "kzred/linalg.hpp"
#include "kzred/lll.hpp"
#include "kzred/matrix.hpp"
#include "kzred/svp.hpp"
#include "kzred/verify.hpp"

namespace kzred::harness {

using json = nlohmann::json;

// Box-Muller normals on top of a seeded 64-bit Mersenne twister.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(th);
    cached_ = true;
    return rad * std::cos(th);
  }

  RealMatrix normal_matrix(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = normal();
    return m;
  }

 private:
  std::mt19937_64 gen_;
  bool cached_ = false;
  double spare_ = 0.0;
};

// [[Re, -Im], [Im, Re]]
inline RealMatrix realify(const RealMatrix& re, const RealMatrix& im) {
  const std::size_t n = re.rows();
  RealMatrix a(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = re(i, j);
      a(i, j + n) = -im(i, j);
      a(i + n, j) = im(i, j);
      a(i + n, j + n) = re(i, j);
    }
  return a;
}

// Case 1: i.i.d. complex Gaussian channel, realified.
inline BasisMatrix gen_case1(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_case1: n must be >= 1");
  NormalSource src(seed);
  const RealMatrix g1 = src.normal_matrix(n);
  const RealMatrix g2 = src.normal_matrix(n);
  return BasisMatrix(realify(g1, g2));
}

// rho^{|i-j|}
inline RealMatrix exponential_correlation(std::size_t n, double rho) {
  RealMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return c;
}

// Symmetric PSD square root by eigendecomposition; eigenvalues in
// [-1e-12 * max, 0) are clamped to zero.
inline RealMatrix symmetric_sqrt(const RealMatrix& s) {
  const std::size_t n = s.rows();
  Eigen::MatrixXd e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = s(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
  if (es.info() != Eigen::Success) throw SquareRootFailure("symmetric_sqrt: eigensolver failed");
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-12 * scale) throw SquareRootFailure("symmetric_sqrt: matrix is not PSD");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const Eigen::MatrixXd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  RealMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = root(i, j);
  return out;
}

// Case 2 with given correlation coefficients; draws G1, G2 from `src`.
inline BasisMatrix gen_case2_with(std::size_t n, double a, double b, NormalSource& src) {
  const RealMatrix psi_h = symmetric_sqrt(exponential_correlation(n, a));
  const RealMatrix phi_h = symmetric_sqrt(exponential_correlation(n, b));
  const RealMatrix g1 = src.normal_matrix(n);
  const RealMatrix g2 = src.normal_matrix(n);
  const RealMatrix re = multiply(multiply(psi_h, g1), phi_h);
  const RealMatrix im = multiply(multiply(psi_h, g2), phi_h);
  return BasisMatrix(realify(re, im));
}

// Case 2: doubly correlated channel, a and b uniform on [0, 1).
inline BasisMatrix gen_case2(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_case2: n must be >= 1");
  NormalSource src(seed);
  const double a = src.uniform();
  const double b = src.uniform();
  return gen_case2_with(n, a, b, src);
}

inline BasisMatrix gen_case(int case_id, std::size_t n, std::uint64_t seed) {
  if (case_id == 1) return gen_case1(n, seed);
  if (case_id == 2) return gen_case2(n, seed);
  throw std::invalid_argument("unknown case id " + std::to_string(case_id));
}

// Per-trial seed; mixes (seed0, case, n, trial) with splitmix64.
inline std::uint64_t trial_seed(std::uint64_t seed0, int case_id, int n, int trial) {
  std::uint64_t x = seed0 ^ (static_cast<std::uint64_t>(case_id) << 56) ^
                    (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(trial);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double condition_number(const RealMatrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues();
  return sv(0) / sv(sv.size() - 1);
}

inline json to_json(const ReductionCertificate& c) {
  json per_index = json::array();
  for (std::size_t i = 0; i < c.kz_per_index.size(); ++i) {
    per_index.push_back({{"index", i + 1},
                         {"abs_r_ii", c.diag_abs[i]},
                         {"lambda", c.enumerated_norms[i]},
                         {"ok", static_cast<bool>(c.kz_per_index[i])}});
  }
  return {{"delta", c.delta},
          {"size_reduced", c.size_reduced},
          {"lovasz", c.lovasz},
          {"kz_condition", c.kz_condition},
          {"unimodular", c.unimodular},
          {"reconstruction_ok", c.reconstruction_ok},
          {"all_pass", c.all_pass()},
          {"det_z", c.det_z.str()},
          {"reconstruction_error", c.reconstruction_error},
          {"kz_per_index", per_index},
          {"notes", c.notes}};
}

inline std::string to_text(const ReductionCertificate& c) {
  std::ostringstream s;
  auto yn = [](bool b) { return b ? "pass" : "FAIL"; };
  s << "size-reduced      : " << yn(c.size_reduced) << '\n'
    << "lovasz (delta=" << c.delta << "): " << yn(c.lovasz) << '\n'
    << "kz condition      : " << yn(c.kz_condition) << '\n'
    << "unimodular        : " << yn(c.unimodular) << " (det Z = " << c.det_z << ")\n"
    << "reconstruction    : " << yn(c.reconstruction_ok)
    << " (rel. error " << c.reconstruction_error << ")\n";
  for (const auto& note : c.notes) s << "  note: " << note << '\n';
  s << "overall           : " << (c.all_pass() ? "PASS" : "FAIL") << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------
// Benchmarks

inline const char* kFlopConventionHeader =
    "# flops: each real +,-,*,/,sqrt counts 1; comparisons and index arithmetic count 0. "
    "SVP rows count the search on the LLL-reduced R only; KZ rows count the whole pipeline.";

inline const char* kBenchColumns =
    "case,n,seed,algorithm,elapsed_ns,flops,nodes,certified,watchdog_fired,error";

struct BenchSpec {
  std::vector<int> cases{1, 2};
  std::vector<int> n_list{1, 2, 3, 4, 5};
  int trials = 200;
  std::vector<std::string> algorithms{"se-original", "se-dkwz", "se-improved"};
  LLLParams lll;
  std::uint64_t seed0 = 1;
  bool certify = false;
  bool watchdog_53bit = false;
  std::optional<std::filesystem::path> emit_certs;
  std::size_t cert_cap = kCertificateCap;
};

struct BenchRecord {
  int case_id = 1;
  int n = 1;  // complex dimension; the real matrix is 2n x 2n
  std::uint64_t seed = 0;
  std::string algorithm;
  std::uint64_t elapsed_ns = 0;
  std::uint64_t flops = 0;
  std::uint64_t nodes = 0;
  bool certified = false;
  bool watchdog_fired = false;
  std::string error;
  double norm = 0.0;  // SVP rows only; not part of the CSV
};

inline std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return s;
}

inline void write_bench_header(std::ostream& out) {
  out << kFlopConventionHeader << '\n' << kBenchColumns << '\n';
}

inline void write_bench_row(std::ostream& out, const BenchRecord& r) {
  out << r.case_id << ',' << r.n << ',' << r.seed << ',' << r.algorithm << ',' << r.elapsed_ns
      << ',' << r.flops << ',' << r.nodes << ',' << (r.certified ? "true" : "false") << ','
      << (r.watchdog_fired ? "true" : "false") << ',' << csv_safe(r.error) << '\n';
}

inline bool is_svp_algorithm(const std::string& alg) { return alg.rfind("se-", 0) == 0; }

namespace detail {

inline void emit_certificate(const BenchSpec& spec, const BenchRecord& rec, int trial,
                             const json& cert) {
  if (!spec.emit_certs) return;
  std::filesystem::create_directories(*spec.emit_certs);
  const auto path = *spec.emit_certs / ("case" + std::to_string(rec.case_id) + "_n" +
                                        std::to_string(rec.n) + "_t" + std::to_string(trial) +
                                        "_" + rec.algorithm + ".json");
  std::ofstream(path) << cert.dump(2) << '\n';
}

inline std::uint64_t elapsed_since(std::chrono::steady_clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
          .count());
}

}  // namespace detail

// Runs every (case, n, trial) and every algorithm on the identical matrix.
// Rows are streamed to `csv` (if given) in (case, n, trial, algorithm) order
// and also returned.
inline std::vector<BenchRecord> run_bench(const BenchSpec& spec, std::ostream* csv = nullptr) {
  spec.lll.validate();
  for (const auto& alg : spec.algorithms) {
    if (is_svp_algorithm(alg)) {
      (void)parse_search_variant(alg);
    } else {
      (void)parse_reduction_algorithm(alg);
    }
  }
  if (csv) write_bench_header(*csv);
  std::vector<BenchRecord> out;
  for (int case_id : spec.cases) {
    for (int n : spec.n_list) {
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t seed = trial_seed(spec.seed0, case_id, n, trial);
        std::optional<BasisMatrix> a;
        std::string gen_error;
        try {
          a.emplace(gen_case(case_id, static_cast<std::size_t>(n), seed));
        } catch (const std::exception& e) {
          gen_error = e.what();
        }
        // Shared LLL-reduced SVP instance for the search rows.
        std::optional<UpperTriangular> r_factor;
        std::optional<ReducedBasis> reduced;
        const bool want_svp = std::any_of(spec.algorithms.begin(), spec.algorithms.end(),
                                          [](const std::string& s) { return is_svp_algorithm(s); });
        if (a && want_svp) {
          try {
            r_factor = qr_factorize(*a).r;
            reduced = lll_reduce(*r_factor, spec.lll);
          } catch (const std::exception& e) {
            gen_error = e.what();
          }
        }

        for (const auto& alg : spec.algorithms) {
          BenchRecord rec;
          rec.case_id = case_id;
          rec.n = n;
          rec.seed = seed;
          rec.algorithm = alg;
          const std::size_t real_dim = 2 * static_cast<std::size_t>(n);
          if (!gen_error.empty() || !a) {
            rec.error = gen_error;
          } else if (is_svp_algorithm(alg)) {
            const auto t0 = std::chrono::steady_clock::now();
            const SvpSolution sol = se_search(reduced->r, parse_search_variant(alg));
            rec.elapsed_ns = detail::elapsed_since(t0);
            rec.flops = sol.counters.flops;
            rec.nodes = sol.counters.nodes;
            rec.norm = sol.norm;
            if (spec.certify && real_dim <= spec.cert_cap) {
              const double ref = se_search_original(*r_factor).norm;
              rec.certified = std::abs(sol.norm - ref) <= kCertificateTolerance * ref;
              detail::emit_certificate(spec, rec, trial,
                                       {{"norm", sol.norm},
                                        {"reference_norm", ref},
                                        {"certified", rec.certified}});
            }
          } else {
            KzOptions opt;
            opt.lll = spec.lll;
            opt.watchdog_53bit = spec.watchdog_53bit;
            try {
              const auto t0 = std::chrono::steady_clock::now();
              const KzResult res = reduce(*a, parse_reduction_algorithm(alg), opt);
              rec.elapsed_ns = detail::elapsed_since(t0);
              rec.flops = res.stats.counter.flops;
              rec.nodes = res.stats.counter.nodes;
              if (spec.certify && real_dim <= spec.cert_cap) {
                const ReductionCertificate cert =
                    assert_kz_reduced(res.basis.r, res.basis.z, *a, spec.lll.delta, spec.cert_cap);
                const bool kz_alg = alg != "lll";
                rec.certified = kz_alg ? cert.all_pass()
                                       : (cert.size_reduced && cert.lovasz && cert.unimodular &&
                                          cert.reconstruction_ok);
                detail::emit_certificate(spec, rec, trial, to_json(cert));
              }
            } catch (const OverflowWatch& e) {
              rec.watchdog_fired = true;
              rec.error = std::string("OverflowWatch: ") + e.what();
            } catch (const std::exception& e) {
              rec.error = e.what();
            }
          }
          if (csv) write_bench_row(*csv, rec);
          out.push_back(std::move(rec));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Worked 5x5 example: an ill-conditioned upper-triangular basis on which the
// baseline loses unimodularity in floating point while the improved
// pipeline needs no expansion at all.

inline RealMatrix example2_matrix() {
  return RealMatrix(5, 5, {10.6347, -66.2715, 9.3046,  17.5349, 24.9625,  //
                           0.0,     8.6759,   -4.7536, -3.9379, -2.3318,  //
                           0.0,     0.0,      0.3876,  0.1296,  -0.2879,  //
                           0.0,     0.0,      0.0,     0.0133,  -0.0082,  //
                           0.0,     0.0,      0.0,     0.0,     0.0015});
}

// Printed R-factor of the baseline on the worked example.
inline RealMatrix example2_baseline_r() {
  return RealMatrix(5, 5, {-0.2256, -0.0792, 0.0125,  0.0,     0.0,      //
                           0.0,     0.2148,  -0.0728, -0.0029, -0.0012,  //
                           0.0,     0.0,     0.2145,  0.0527,  -0.0211,  //
                           0.0,     0.0,     0.0,     -0.1103, 0.0306,   //
                           0.0,     0.0,     0.0,     0.0,     0.6221});
}

// Printed R-factor of the improved pipeline on the worked example.
inline RealMatrix example2_improved_r() {
  return RealMatrix(5, 5, {-0.2256, 0.0792,  -0.0126, 0.0028,  -0.0621,  //
                           0.0,     -0.2148, 0.0728,  -0.0084, 0.0930,   //
                           0.0,     0.0,     0.2145,  0.0292,  -0.0029,  //
                           0.0,     0.0,     0.0,     -0.2320, 0.0731,   //
                           0.0,     0.0,     0.0,     0.0,     -0.2959});
}

inline const std::vector<double> kExample2ReferenceDiag = {0.2256, 0.2148, 0.2145, 0.2320,
                                                           0.2959};

struct PipelineReport {
  std::string algorithm;
  bool watchdog = false;
  bool completed = false;
  bool watchdog_fired = false;
  std::string error;
  std::optional<ReductionCertificate> certificate;
  bool lll_certificate = false;  // size reduction + Lovasz + unimodular
  std::vector<double> diag_abs;
  std::vector<std::vector<Integer>> inner_solutions;
  std::size_t expansions = 0;
  std::string max_abs_z;
  RealMatrix r;
  IntMatrix z;
};

struct Example2Report {
  double delta = 0.99;
  double condition_number = 0.0;
  PipelineReport improved;
  PipelineReport zqw_watchdog;
  PipelineReport zqw_exact;
};

inline PipelineReport run_example2_pipeline(ReductionAlgorithm alg, bool watchdog,
                                            double delta) {
  const BasisMatrix a(example2_matrix());
  PipelineReport rep;
  rep.algorithm = std::string(to_string(alg));
  rep.watchdog = watchdog;
  KzOptions opt;
  opt.lll.delta = delta;
  opt.watchdog_53bit = watchdog;
  try {
    const KzResult res = reduce(a, alg, opt);
    rep.completed = true;
    rep.inner_solutions = res.stats.inner_solutions;
    rep.expansions = res.stats.expansions;
    rep.max_abs_z = res.stats.max_abs_integer.str();
    rep.r = res.basis.r.matrix();
    rep.z = res.basis.z;
    for (std::size_t i = 0; i < a.cols(); ++i) rep.diag_abs.push_back(std::abs(rep.r(i, i)));
    rep.certificate = assert_kz_reduced(res.basis.r, res.basis.z, a, delta);
    const auto& c = *rep.certificate;
    rep.lll_certificate = c.size_reduced && c.lovasz && c.unimodular;
  } catch (const OverflowWatch& e) {
    rep.watchdog_fired = true;
    rep.error = e.what();
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

inline Example2Report cmd_example2(double delta = 0.99) {
  Example2Report rep;
  rep.delta = delta;
  rep.condition_number = condition_number(example2_matrix());
  rep.improved = run_example2_pipeline(ReductionAlgorithm::KzImproved, false, delta);
  rep.zqw_watchdog = run_example2_pipeline(ReductionAlgorithm::KzZqw, true, delta);
  rep.zqw_exact = run_example2_pipeline(ReductionAlgorithm::KzZqw, false, delta);
  return rep;
}

inline json to_json(const PipelineReport& p) {
  json inner = json::array();
  for (const auto& s : p.inner_solutions) {
    json v = json::array();
    for (const auto& x : s) v.push_back(x.str());
    inner.push_back(v);
  }
  json j = {{"algorithm", p.algorithm},
            {"watchdog_53bit", p.watchdog},
            {"completed", p.completed},
            {"watchdog_fired", p.watchdog_fired},
            {"error", p.error},
            {"lll_certificate", p.lll_certificate},
            {"diag_abs", p.diag_abs},
            {"inner_solutions", inner},
            {"expansions", p.expansions},
            {"max_abs_integer", p.max_abs_z}};
  if (p.certificate) j["certificate"] = to_json(*p.certificate);
  return j;
}

inline json to_json(const Example2Report& r) {
  return {{"delta", r.delta},
          {"condition_number", r.condition_number},
          {"reference_diag", kExample2ReferenceDiag},
          {"kz_improved", to_json(r.improved)},
          {"kz_zqw_watchdog", to_json(r.zqw_watchdog)},
          {"kz_zqw_exact", to_json(r.zqw_exact)}};
}

inline std::string to_text(const Example2Report& r) {
  std::ostringstream s;
  s << "worked 5x5 example, delta = " << r.delta << '\n';
  s << "condition number (2-norm): " << r.condition_number << '\n';
  s << "reference |diag R|: ";
  for (double d : kExample2ReferenceDiag) s << d << ' ';
  s << '\n';
  for (const PipelineReport* p : {&r.improved, &r.zqw_watchdog, &r.zqw_exact}) {
    s << "\n== " << p->algorithm << (p->watchdog ? " (53-bit watchdog)" : "") << " ==\n";
    if (!p->completed) {
      s << (p->watchdog_fired ? "watchdog fired: " : "error: ") << p->error << '\n';
      continue;
    }
    s << "|diag R|: ";
    for (double d : p->diag_abs) s << d << ' ';
    s << "\nexpansions: " << p->expansions << ", max |integer| seen: " << p->max_abs_z << '\n';
    s << "inner SVP solutions:";
    for (const auto& v : p->inner_solutions) {
      s << " (";
      for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
      s << ')';
    }
    s << "\nLLL certificate: " << (p->lll_certificate ? "pass" : "FAIL") << '\n';
    if (p->certificate) s << to_text(*p->certificate);
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Bound tables

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

inline void write_bound_table(std::ostream& out, bounds::Table table, int n_max,
                              double delta = 0.99) {
  using namespace bounds;
  switch (table) {
    case Table::Hermite:
      out << "n,gamma_exact,linear_bound,blichfeldt,neu17,linear_over_blichfeldt\n";
      for (int n = 1; n <= n_max; ++n) {
        out << n << ',' << (hermite_known(n) ? fmt(hermite_exact(n)) : "") << ','
            << fmt(hermite_linear_bound(n)) << ',' << fmt(blichfeldt_bound(n)) << ','
            << (n >= 3 ? fmt(neu17_linear_bound(n)) : "") << ','
            << fmt(hermite_linear_bound(n) / blichfeldt_bound(n)) << '\n';
      }
      break;
    case Table::F:
      out << "n,f,hanrot_stehle\n";
      for (int n = 1; n <= n_max; ++n)
        out << n << ',' << fmt(kz_constant_bound(n)) << ','
            << (n >= 2 ? fmt(hanrot_stehle_bound(n)) : "") << '\n';
      break;
    case Table::G:
      out << "i,g,g_partial_sum,boosted_first_column,boosted_column\n";
      for (int i = 1; i <= n_max; ++i)
        out << i << ',' << fmt(column_ratio_bound(i)) << ','
            << (i <= 8 ? fmt(column_ratio_bound(i, ColumnRatioMode::PartialSum)) : "") << ','
            << (i >= 2 ? fmt(boosted_first_column_bound(i)) : "") << ','
            << (i >= 2 ? fmt(boosted_column_bound(i)) : "") << '\n';
      break;
    case Table::H:
      out << "n,h,od_bound,boosted_od_bound\n";
      for (int n = 1; n <= n_max; ++n)
        out << n << ',' << fmt(od_factor(n)) << ',' << fmt(od_bound(n)) << ','
            << fmt(boosted_od_bound(n)) << '\n';
      break;
    case Table::Thm5:
      out << "n,i,delta,bound\n";
      for (int n = 1; n <= n_max; ++n)
        for (int i = 1; i <= n; ++i)
          out << n << ',' << i << ',' << delta << ',' << fmt(svp_entry_bound(n, i, delta))
              << '\n';
      break;
    case Table::Ratio:
      out << "n,linear_over_blichfeldt\n";
      for (int n = 2; n <= n_max; ++n)
        out << n << ',' << fmt(hermite_linear_bound(n) / blichfeldt_bound(n)) << '\n';
      break;
  }
}

}  // namespace kzred::harness
