#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kzred/harness.hpp"
#include "kzred/lll.hpp"
#include "kzred/verify.hpp"

using namespace kzred;

namespace {

UpperTriangular random_r(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = nd(gen);
  return qr_factorize(a).r;
}

}  // namespace

TEST(LLL, SingleSizeReductionStep) {
  const ReducedBasis out = lll_reduce(UpperTriangular(2, {1, 1, 0, 1}), {});
  EXPECT_NEAR(std::abs(out.r(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.r(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(out.r(1, 1)), 1.0, 1e-15);
  EXPECT_EQ(out.z, IntMatrix(2, 2, {1, -1, 0, 1}));
}

TEST(LLL, IdentityIsFixed) {
  const ReducedBasis out = lll_reduce(UpperTriangular::identity(4), {});
  EXPECT_EQ(out.r.matrix(), RealMatrix::identity(4));
  EXPECT_EQ(out.z, IntMatrix::identity(4));
}

TEST(LLL, ParamsValidated) {
  LLLParams p;
  p.delta = 0.25;
  EXPECT_THROW(lll_reduce(UpperTriangular::identity(2), p), DomainError);
  p.delta = 1.01;
  EXPECT_THROW(lll_reduce(UpperTriangular::identity(2), p), DomainError);
  p.delta = 1.0;
  EXPECT_NO_THROW(lll_reduce(UpperTriangular::identity(2), p));
}

TEST(LLL, RandomOutputsAreReducedAndConsistent) {
  for (unsigned seed = 1; seed <= 100; ++seed) {
    const std::size_t n = 2 + seed % 9;
    const UpperTriangular r = random_r(n, seed);
    const ReducedBasis out = lll_reduce(r, {});
    EXPECT_TRUE(is_size_reduced(out.r)) << seed;
    EXPECT_TRUE(satisfies_lovasz(out.r, 0.99)) << seed;
    EXPECT_TRUE(is_lll_reduced(out.r)) << seed;
    EXPECT_EQ(abs(exact_det(out.z)), 1) << seed;
    // R Z = Q Rbar: the R-factor of R Z equals Rbar up to row signs.
    const RealMatrix rz = multiply(r.matrix(), out.z);
    EXPECT_LE(r_factor_distance(out.r.matrix(), qr_factorize(rz).r.matrix()), 1e-10) << seed;
  }
}

TEST(LLL, Example2IsReduced) {
  const UpperTriangular r = qr_factorize(harness::example2_matrix()).r;
  EXPECT_TRUE(is_lll_reduced(lll_reduce(r, {}).r));
}

TEST(SizeReduced, Boundary) {
  EXPECT_TRUE(is_size_reduced(UpperTriangular(2, {2, 1, 0, 1})));
  EXPECT_FALSE(is_size_reduced(UpperTriangular(2, {2, 1.1, 0, 1})));
  EXPECT_TRUE(is_size_reduced(UpperTriangular(2, {-2, -1, 0, 1})));
}

TEST(SizeReduce, ReducesInPlace) {
  UpperTriangular r(3, {1, 2.7, -3.4, 0, 1, 1.6, 0, 0, 1});
  UnimodularMatrix z = UnimodularMatrix::identity(3);
  size_reduce(r, z);
  EXPECT_TRUE(is_size_reduced(r));
  EXPECT_EQ(abs(exact_det(z)), 1);
}

TEST(Lovasz, PrintedOutputs) {
  EXPECT_TRUE(satisfies_lovasz(UpperTriangular::identity(5), 0.99));
  EXPECT_TRUE(satisfies_lovasz(UpperTriangular::identity(5), 1.0));
  const UpperTriangular baseline(harness::example2_baseline_r());
  const UpperTriangular improved(harness::example2_improved_r());
  EXPECT_FALSE(satisfies_lovasz(baseline, 0.99));
  // The violation sits at index 3: 0.99 r33^2 > r34^2 + r44^2.
  EXPECT_GT(0.99 * 0.2145 * 0.2145, 0.0527 * 0.0527 + 0.1103 * 0.1103);
  EXPECT_TRUE(satisfies_lovasz(improved, 0.99));
  EXPECT_TRUE(is_lll_reduced(improved));
}
