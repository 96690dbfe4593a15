#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/matrix.hpp"
#include "schurlab/svd.hpp"
#include "schurlab/symnorm.hpp"

using namespace schurlab;

namespace {

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

ComplexMatrix reconstruct(const SvdResult& r) {
  ComplexMatrix us = r.U;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= r.s[j];
  return us * r.V.adjoint();
}

}  // namespace

TEST(Matrix, ProductMatchesNaive) {
  std::mt19937_64 rng(1);
  const auto a = oracle::random_matrix(rng, 5, 7);
  const auto b = oracle::random_matrix(rng, 7, 3);
  EXPECT_LT(max_entry_diff(a * b, oracle::naive_product(a, b)), 1e-13);
}

TEST(Matrix, KroneckerMatchesNaive) {
  std::mt19937_64 rng(2);
  const auto a = oracle::random_matrix(rng, 3, 2);
  const auto b = oracle::random_matrix(rng, 2, 4);
  EXPECT_EQ(kronecker(a, b), oracle::naive_kronecker(a, b));
}

TEST(Matrix, ShapeMismatchThrows) {
  ComplexMatrix a(2, 3), b(2, 2);
  EXPECT_THROW(a * a, InvalidInput);
  EXPECT_THROW(a += b, InvalidInput);
  EXPECT_THROW(frobenius_distance(a, b), InvalidInput);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), InvalidInput);
}

TEST(Matrix, AdjointAndHermitian) {
  std::mt19937_64 rng(3);
  const auto h = oracle::random_hermitian(rng, 4);
  EXPECT_TRUE(h.is_hermitian(1e-15));
  const auto x = oracle::random_matrix(rng, 4, 4);
  EXPECT_FALSE(x.is_hermitian(1e-3));
  EXPECT_EQ(x.adjoint().adjoint(), x);
}

TEST(Matrix, BlockDiagonalPlacesBlocks) {
  ComplexMatrix a(1, 1, {cplx{2.0}});
  ComplexMatrix b(2, 1, {cplx{3.0}, cplx{4.0}});
  const ComplexMatrix blocks[] = {a, b};
  const auto d = block_diagonal(blocks);
  ASSERT_EQ(d.rows(), 3u);
  ASSERT_EQ(d.cols(), 2u);
  EXPECT_EQ(d(0, 0), cplx{2.0});
  EXPECT_EQ(d(1, 1), cplx{3.0});
  EXPECT_EQ(d(2, 1), cplx{4.0});
  EXPECT_EQ(d(0, 1), cplx{0.0});
}

TEST(Matrix, TraceInnerIsConjugateLinearInFirst) {
  std::mt19937_64 rng(4);
  const auto a = oracle::random_matrix(rng, 3, 3);
  const auto b = oracle::random_matrix(rng, 3, 3);
  const cplx direct = [&] {
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.data()[i]) * b.data()[i];
    return acc;
  }();
  EXPECT_LT(std::abs(trace_inner(a, b) - direct), 1e-13);
}

TEST(Matrix, FrobeniusNormAvoidsOverflow) {
  ComplexMatrix x(2, 2);
  x(0, 0) = 1e200;
  x(1, 1) = 1e200;
  EXPECT_DOUBLE_EQ(x.frobenius_norm(), std::sqrt(2.0) * 1e200);
}

TEST(Svd, DiagonalExamples) {
  const double d[] = {3.0, -4.0};
  const auto s = singular_values(ComplexMatrix::diagonal(d));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0], 4.0);
  EXPECT_DOUBLE_EQ(s[1], 3.0);
}

TEST(Svd, NilpotentJordanBlock) {
  ComplexMatrix x(2, 2);
  x(0, 1) = 1.0;
  const auto s = singular_values(x);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 0.0);
}

TEST(Svd, ZeroMatrix) {
  const auto s = singular_values(ComplexMatrix(3, 5));
  ASSERT_EQ(s.size(), 3u);
  for (double v : s.values()) EXPECT_EQ(v, 0.0);
  const auto r = jacobi_svd(ComplexMatrix(3, 3));
  EXPECT_LT(max_entry_diff(r.U.adjoint() * r.U, ComplexMatrix::identity(3)), 1e-14);
}

TEST(Svd, RejectsNonFinite) {
  ComplexMatrix x(2, 2);
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(singular_values(x), InvalidInput);
  EXPECT_THROW(jacobi_svd(x), InvalidInput);
}

TEST(Svd, ReconstructsRectangular) {
  std::mt19937_64 rng(5);
  for (auto [r, c] : {std::pair{6, 4}, std::pair{4, 6}, std::pair{5, 5}, std::pair{1, 3}}) {
    const auto x = oracle::random_matrix(rng, r, c);
    const auto res = jacobi_svd(x);
    EXPECT_LT(max_entry_diff(reconstruct(res), x), 1e-13 * x.frobenius_norm()) << r << "x" << c;
    const auto k = static_cast<std::size_t>(std::min(r, c));
    EXPECT_LT(max_entry_diff(res.U.adjoint() * res.U, ComplexMatrix::identity(k)), 1e-13);
    EXPECT_LT(max_entry_diff(res.V.adjoint() * res.V, ComplexMatrix::identity(k)), 1e-13);
    for (std::size_t i = 1; i < res.s.size(); ++i) EXPECT_GE(res.s[i - 1], res.s[i]);
  }
}

TEST(Svd, RankDeficientReconstruction) {
  std::mt19937_64 rng(6);
  const auto u = oracle::random_matrix(rng, 6, 2);
  const auto v = oracle::random_matrix(rng, 2, 6);
  const auto x = u * v;
  const auto res = jacobi_svd(x);
  EXPECT_LT(max_entry_diff(reconstruct(res), x), 1e-13 * x.frobenius_norm());
  EXPECT_LT(res.s[2], 1e-13 * res.s[0]);
  EXPECT_LT(max_entry_diff(res.U.adjoint() * res.U, ComplexMatrix::identity(6)), 1e-13);
}

TEST(Svd, ValuesPathMatchesVectorsPath) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {3u, 17u, 40u}) {
    const auto x = oracle::random_matrix(rng, n, n);
    const auto a = jacobi_singular_values(x);
    const auto b = jacobi_svd(x).s;
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * b[0]);
  }
}

TEST(Svd, RealPathMatchesComplexEmbedding) {
  std::mt19937_64 rng(8);
  const auto x = oracle::random_matrix(rng, 20, 20, true);
  // multiplying by a unit phase forces the complex path without changing s(X)
  const auto y = x * std::polar(1.0, 0.7);
  const auto a = jacobi_singular_values(x);
  const auto b = jacobi_singular_values(y);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * a[0]);
}

TEST(Svd, PermutedDirectSumSplitsCorrectly) {
  std::mt19937_64 rng(9);
  const auto a = oracle::random_matrix(rng, 3, 3);
  const auto b = oracle::random_matrix(rng, 4, 4);
  const ComplexMatrix blocks[] = {a, b};
  const auto d = block_diagonal(blocks);
  // interleave rows and columns so the components are not contiguous
  const std::size_t perm[] = {3, 0, 4, 1, 5, 2, 6};
  ComplexMatrix p(7, 7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) p(i, j) = d(perm[i], perm[(j + 2) % 7]);
  std::vector<double> expect;
  for (double v : jacobi_svd(a).s) expect.push_back(v);
  for (double v : jacobi_svd(b).s) expect.push_back(v);
  std::sort(expect.begin(), expect.end(), std::greater<>());
  const auto got = jacobi_singular_values(p);
  ASSERT_EQ(got.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(got[i], expect[i], 1e-13 * expect[0]);
}

TEST(Svd, TwoByTwoClosedForm) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const auto x = oracle::random_matrix(rng, 2, 2, t % 2 == 0);
    const auto ref = oracle::singular_values_2x2(x);
    const auto got = singular_values(x);
    EXPECT_NEAR(got[0], ref[0], 1e-10 * ref[0]);
    EXPECT_NEAR(got[1], ref[1], 1e-10 * ref[0]);
  }
}

TEST(Svd, CharacteristicPolynomialOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 2);
    const auto x = oracle::random_matrix(rng, n, n, t % 3 == 0);
    const auto ref = oracle::singular_values_charpoly(x);
    const auto got = singular_values(x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], ref[i], 1e-10 * ref[0]) << "trial " << t;
  }
}

TEST(Svd, KroneckerSingularValuesArePairwiseProducts) {
  std::mt19937_64 rng(12);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto x = oracle::random_matrix(rng, n, n);
    const auto x0 = oracle::random_matrix(rng, 2, 2);
    const auto sx = singular_values(x);
    const auto s0 = singular_values(x0);
    std::vector<double> prod;
    for (double a : sx.values())
      for (double b : s0.values()) prod.push_back(a * b);
    std::sort(prod.begin(), prod.end(), std::greater<>());
    const auto got = singular_values(oracle::naive_kronecker(x, x0));
    for (std::size_t i = 0; i < prod.size(); ++i) EXPECT_NEAR(got[i], prod[i], 1e-12 * prod[0]);
  }
}

TEST(Svd, UnitaryInvariance) {
  std::mt19937_64 rng(13);
  const auto x = oracle::random_matrix(rng, 8, 8);
  const auto u = oracle::random_unitary(rng, 8);
  const auto v = oracle::random_unitary(rng, 8);
  const auto a = singular_values(x);
  const auto b = singular_values(u * x * v);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * a[0]);
}

TEST(Svd, GradedMatrixKeepsSmallValues) {
  // diag(1, 1e-8, 1e-16) mixed by a permutation: one-sided Jacobi keeps relative accuracy
  ComplexMatrix x(3, 3);
  x(0, 2) = 1.0;
  x(1, 0) = 1e-8;
  x(2, 1) = 1e-16;
  const auto s = singular_values(x);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 1e-8);
  EXPECT_DOUBLE_EQ(s[2], 1e-16);
}
