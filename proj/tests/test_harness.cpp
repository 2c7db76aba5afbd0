#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "kzred/harness.hpp"

using namespace kzred;
using namespace kzred::harness;

TEST(Case1, BlockStructure) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::size_t n = 3;
    const BasisMatrix a = gen_case1(n, seed);
    ASSERT_EQ(a.rows(), 2 * n);
    ASSERT_EQ(a.cols(), 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(a(i, j), a(i + n, j + n));
        EXPECT_EQ(a(i, j + n), -a(i + n, j));
      }
  }
}

TEST(Case1, Reproducible) {
  EXPECT_EQ(gen_case1(4, 99).matrix(), gen_case1(4, 99).matrix());
  EXPECT_NE(gen_case1(4, 99).matrix(), gen_case1(4, 100).matrix());
  EXPECT_EQ(gen_case2(4, 99).matrix(), gen_case2(4, 99).matrix());
}

TEST(Normals, SampleMoments) {
  NormalSource src(2024);
  const int draws = 10000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = src.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_LE(std::abs(s / draws), 0.05);
  EXPECT_NEAR(s2 / draws, 1.0, 0.05);

  double u = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = src.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    u += x;
  }
  EXPECT_NEAR(u / draws, 0.5, 0.01);
}

TEST(Case1, EntryMean) {
  double s = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const BasisMatrix a = gen_case1(10, seed);  // 400 entries each
    for (double x : a.matrix().data()) s += x, ++count;
  }
  EXPECT_EQ(count, 10000);
  EXPECT_LE(std::abs(s / count), 0.05);
}

TEST(Case2, UncorrelatedLimitIsCase1) {
  NormalSource s1(7), s2(7);
  const BasisMatrix a = gen_case2_with(4, 0.0, 0.0, s1);
  const RealMatrix g1 = s2.normal_matrix(4), g2 = s2.normal_matrix(4);
  const RealMatrix b = realify(g1, g2);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(a(i, j), b(i, j), 1e-14);
}

TEST(Case2, SquareRootSquares) {
  for (double rho : {0.0, 0.3, 0.9, 0.999}) {
    const RealMatrix psi = exponential_correlation(6, rho);
    const RealMatrix h = symmetric_sqrt(psi);
    const RealMatrix hh = multiply(h, h);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(hh(i, j), psi(i, j), 1e-10);
        EXPECT_NEAR(h(i, j), h(j, i), 1e-12);
      }
  }
  EXPECT_THROW(symmetric_sqrt(RealMatrix(2, 2, {1, 2, 2, 1})), SquareRootFailure);
}

TEST(Case2, WorseConditionedThanCase1) {
  double c1 = 0.0, c2 = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    c1 += std::log(condition_number(gen_case1(10, seed).matrix()));
    c2 += std::log(condition_number(gen_case2(10, seed).matrix()));
  }
  EXPECT_GT(c2, c1);
}

TEST(Bench, ZeroTrialsHeaderOnly) {
  BenchSpec spec;
  spec.trials = 0;
  std::ostringstream out;
  EXPECT_TRUE(run_bench(spec, &out).empty());
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 1), "#");
  EXPECT_NE(s.find("\ncase,n,seed,algorithm,elapsed_ns,flops,nodes,certified,watchdog_fired,error\n"),
            std::string::npos);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
}

TEST(Bench, RowsCertifiedAndDeterministic) {
  BenchSpec spec;
  spec.cases = {1, 2};
  spec.n_list = {2, 3};
  spec.trials = 3;
  spec.algorithms = {"se-original", "se-dkwz", "se-improved", "kz-zqw", "kz-improved", "lll"};
  spec.certify = true;
  const auto a = run_bench(spec);
  const auto b = run_bench(spec);
  ASSERT_EQ(a.size(), 2u * 2u * 3u * 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].flops, b[i].flops);
    EXPECT_EQ(a[i].nodes, b[i].nodes);
    EXPECT_TRUE(a[i].error.empty()) << a[i].error;
    EXPECT_TRUE(a[i].certified) << a[i].algorithm << " case " << a[i].case_id << " n " << a[i].n;
  }
  // SVP rows share one instance and agree on the norm.
  for (std::size_t i = 0; i < a.size(); i += 6) {
    EXPECT_NEAR(a[i].norm, a[i + 2].norm, 1e-12 * a[i].norm);
    EXPECT_LE(a[i + 2].nodes, a[i + 1].nodes);
    EXPECT_LE(a[i + 1].nodes, a[i].nodes);
  }
}

TEST(Bench, EmitsCertificates) {
  const auto dir = std::filesystem::temp_directory_path() / "kzred_cert_test";
  std::filesystem::remove_all(dir);
  BenchSpec spec;
  spec.cases = {1};
  spec.n_list = {2};
  spec.trials = 2;
  spec.algorithms = {"kz-improved"};
  spec.certify = true;
  spec.emit_certs = dir;
  const auto rows = run_bench(spec);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  EXPECT_EQ(files, rows.size());
  std::filesystem::remove_all(dir);
}

TEST(Bench, UnknownAlgorithmRejected) {
  BenchSpec spec;
  spec.trials = 1;
  spec.algorithms = {"bogus"};
  EXPECT_THROW(run_bench(spec), std::invalid_argument);
}

TEST(Example2, Report) {
  const Example2Report rep = cmd_example2();
  EXPECT_NEAR(rep.condition_number / 1e5, 1.0, 0.1);
  ASSERT_TRUE(rep.improved.completed);
  ASSERT_TRUE(rep.improved.certificate.has_value());
  EXPECT_TRUE(rep.improved.lll_certificate);
  EXPECT_EQ(rep.improved.certificate->det_z, 1);
  EXPECT_EQ(rep.improved.expansions, 0u);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(rep.improved.diag_abs[i], kExample2ReferenceDiag[i], 5e-4);
  const bool zqw_flagged =
      rep.zqw_watchdog.watchdog_fired ||
      (rep.zqw_watchdog.certificate && !rep.zqw_watchdog.certificate->all_pass());
  EXPECT_TRUE(zqw_flagged);
  const json j = to_json(rep);
  EXPECT_TRUE(j.contains("kz_improved"));
  EXPECT_FALSE(to_text(rep).empty());
}

TEST(BoundTables, CsvShapes) {
  for (const char* t : {"hermite", "f", "g", "h", "thm5", "ratio"}) {
    std::ostringstream out;
    write_bound_table(out, bounds::parse_table(t), 12);
    const std::string s = out.str();
    EXPECT_GT(std::count(s.begin(), s.end(), '\n'), 5) << t;
    EXPECT_EQ(s.find("nan"), std::string::npos) << t;
    EXPECT_EQ(s.find("inf"), std::string::npos) << t;
  }
  std::ostringstream ratio;
  write_bound_table(ratio, bounds::Table::Ratio, 2000);
  const std::string s = ratio.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2000);  // header + n = 2..2000
}

TEST(TrialSeeds, Distinct) {
  EXPECT_NE(trial_seed(1, 1, 2, 0), trial_seed(1, 1, 2, 1));
  EXPECT_NE(trial_seed(1, 1, 2, 0), trial_seed(1, 2, 2, 0));
  EXPECT_NE(trial_seed(1, 1, 2, 0), trial_seed(1, 1, 3, 0));
  EXPECT_EQ(trial_seed(5, 2, 4, 7), trial_seed(5, 2, 4, 7));
}
