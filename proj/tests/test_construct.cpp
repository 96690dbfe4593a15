#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "schurlab/construct.hpp"
#include "schurlab/errors.hpp"

using namespace schurlab;

namespace {

const ScalarC1Function kCube = polynomial({0.0, 0.0, 0.0, 1.0}, "t^3");

}  // namespace

TEST(PaperMatrices, SmallestCase) {
  const auto pm = build_paper_matrices(3);
  ASSERT_EQ(pm.D.size(), 3u);
  ASSERT_EQ(pm.A.rows(), 6u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(pm.D[j], std::exp(-static_cast<double>(j + 1)));
  const double e1 = std::exp(-1.0), e2 = std::exp(-2.0), e3 = std::exp(-3.0);
  EXPECT_NEAR(pm.V(0, 1).real(), 1.0 / (e1 + e2), 1e-15);
  EXPECT_NEAR(pm.V(0, 2).real(), 1.0 / (2.0 * (e1 + e3)), 1e-15);
  EXPECT_NEAR(pm.V(0, 1).real(), 1.987223, 1e-6);
  EXPECT_EQ(pm.V(1, 1), cplx{});
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_DOUBLE_EQ(pm.B[j], pm.D[j]);
    EXPECT_DOUBLE_EQ(pm.B[j + 3], -pm.D[j]);
  }
}

TEST(PaperMatrices, Structure) {
  for (int m : {3, 7, 20}) {
    const auto pm = build_paper_matrices(m);
    const auto n = static_cast<std::size_t>(m);
    EXPECT_EQ(pm.V.transpose() * cplx{-1.0}, pm.V);
    EXPECT_TRUE(pm.A.is_hermitian());
    EXPECT_TRUE(pm.A.is_real());
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        EXPECT_EQ(pm.A(j, k), cplx{});
        EXPECT_EQ(pm.A(n + j, n + k), cplx{});
        EXPECT_EQ(pm.A(j, n + k), pm.V(j, k));
        EXPECT_EQ(pm.A(n + j, k), -pm.V(j, k));
      }
  }
}

TEST(PaperMatrices, CommutatorIsHilbertBlock) {
  const auto pm = build_paper_matrices(9);
  const auto c = commutator_BA(pm);
  // the entrywise product recomputed from B and A directly
  const auto dense = commutator(pm.B.to_matrix(), pm.A);
  EXPECT_LT(frobenius_distance(c, dense), 1e-13);
  for (std::size_t j = 0; j < 9; ++j)
    for (std::size_t k = 0; k < 9; ++k) {
      const double hjk = j == k ? 0.0 : 1.0 / (static_cast<double>(k) - static_cast<double>(j));
      EXPECT_NEAR(c(j, 9 + k).real(), hjk, 1e-14);
      EXPECT_NEAR(c(9 + j, k).real(), hjk, 1e-14);
      EXPECT_EQ(c(j, k), cplx{});
    }
}

TEST(PaperMatrices, RangeLimits) {
  EXPECT_THROW(build_paper_matrices(2), InvalidInput);
  EXPECT_THROW(build_paper_matrices(-5), InvalidInput);
  EXPECT_THROW(build_paper_matrices(kMaxPaperM + 1), SizeLimitError);
  EXPECT_NO_THROW(build_paper_matrices(kMaxPaperM));
}

TEST(TensorLift, Examples) {
  const auto lift = make_tensor_lift(2, SingularValueSequence({1.0}));
  std::mt19937_64 rng(40);
  const auto x = oracle::random_matrix(rng, 2, 2);
  EXPECT_EQ(lift.phi(x), x);
  EXPECT_EQ(lift.psi(x), x);

  const auto l2 = make_tensor_lift(3, SingularValueSequence({0.5, 0.25}));
  EXPECT_EQ(l2.k_n(), 6u);
  const double d[] = {0.5, 0.25};
  const auto y = oracle::random_matrix(rng, 3, 3);
  EXPECT_EQ(l2.phi(y), oracle::naive_kronecker(y, ComplexMatrix::identity(2)));
  EXPECT_EQ(l2.psi(y), oracle::naive_kronecker(y, ComplexMatrix::diagonal(d)));
  const auto pb = l2.phi(DiagonalOperator({1.0, 2.0, 3.0}));
  EXPECT_EQ(std::vector<double>(pb.eigenvalues().begin(), pb.eigenvalues().end()),
            (std::vector<double>{1.0, 1.0, 2.0, 2.0, 3.0, 3.0}));
}

TEST(TensorLift, Validation) {
  EXPECT_THROW(make_tensor_lift(0, SingularValueSequence({1.0})), InvalidInput);
  EXPECT_THROW(make_tensor_lift(2, SingularValueSequence()), InvalidInput);
  EXPECT_THROW(make_tensor_lift(2, SingularValueSequence({0.0, 0.0})), InvalidInput);
  const auto lift = make_tensor_lift(2, SingularValueSequence({1.0}));
  EXPECT_THROW(lift.psi(ComplexMatrix(3, 3)), InvalidInput);
}

TEST(TensorLift, PsiSingularValuesAreProducts) {
  std::mt19937_64 rng(41);
  const auto lift = make_tensor_lift(5, SingularValueSequence({0.7, 0.7, 0.2}));
  const auto x = oracle::random_matrix(rng, 5, 5);
  const auto predicted = lift.psi_singular_values(singular_values(x));
  const auto direct = singular_values(lift.psi(x));
  ASSERT_EQ(predicted.size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_NEAR(predicted[i], direct[i], 1e-12 * direct[0]);
}

TEST(TensorLift, MultiplicativeAgainstPhi) {
  // Phi(U) Psi(X) Phi(V) = Psi(U X V)
  std::mt19937_64 rng(42);
  const auto lift = make_tensor_lift(4, SingularValueSequence({0.9, 0.3}));
  const auto u = oracle::random_matrix(rng, 4, 4);
  const auto x = oracle::random_matrix(rng, 4, 4);
  const auto v = oracle::random_matrix(rng, 4, 4);
  const auto lhs = lift.phi(u) * lift.psi(x) * lift.phi(v);
  const auto rhs = lift.psi(u * x * v);
  EXPECT_LT(frobenius_distance(lhs, rhs), 1e-13 * rhs.frobenius_norm());
}

TEST(Intertwining, RandomConfigurations) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> nsz(1, 8), ksz(1, 4);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<std::size_t>(nsz(rng));
    std::vector<double> x0(static_cast<std::size_t>(ksz(rng)));
    for (auto& v : x0) v = u(rng);
    const auto lift = make_tensor_lift(n, decreasing_rearrangement(x0));
    const DiagonalOperator b(oracle::random_eigenvalues(rng, n));
    const auto x = oracle::random_matrix(rng, n, n);
    const double scale = schur_identity_scale(kCube, b, x);
    EXPECT_LE(verify_intertwining(lift, kCube, b, x), 1e-12 * std::max(scale, 1e-300));
  }
}

TEST(Intertwining, RepeatedEigenvalues) {
  std::mt19937_64 rng(44);
  const auto lift = make_tensor_lift(4, SingularValueSequence({1.0, 0.5}));
  const DiagonalOperator b({0.3, 0.3, -0.1, 0.3});
  const auto x = oracle::random_matrix(rng, 4, 4);
  EXPECT_LE(verify_intertwining(lift, kCube, b, x), 1e-12 * schur_identity_scale(kCube, b, x));
}

TEST(Sandwich, SupModeKyFan) {
  std::mt19937_64 rng(45);
  const auto lift = make_tensor_lift(6, SingularValueSequence({1.0}));
  for (int t = 0; t < 20; ++t) {
    const auto r = verify_norm_sandwich(lift, SymmetricNormSpec::kyfan(1), oracle::random_matrix(rng, 6, 6), 0.5,
                                        BlockMode::sup);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.psi_norm, r.x_norm, 1e-12 * r.x_norm);
  }
}

TEST(Sandwich, SumModeSchattenOne) {
  std::mt19937_64 rng(46);
  const auto lift = make_tensor_lift(6, SingularValueSequence({1.0}));
  const auto r = verify_norm_sandwich(lift, SymmetricNormSpec::schatten(1.0), oracle::random_matrix(rng, 6, 6), 0.5,
                                      BlockMode::sum);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.mode, BlockMode::sum);
  EXPECT_LE(r.lower, r.psi_norm);
  EXPECT_LE(r.psi_norm, r.upper);
}

TEST(Sandwich, RejectsUnverifiedFamily) {
  std::mt19937_64 rng(47);
  const auto lift = make_tensor_lift(4, SingularValueSequence({1.0}));
  EXPECT_THROW(verify_norm_sandwich(lift, SymmetricNormSpec::schatten(2.0), oracle::random_matrix(rng, 4, 4), 0.5,
                                    BlockMode::sup),
               InvalidInput);
}

TEST(PaperMatrices, ReducedCommutatorIsSymmetric) {
  // V is antisymmetric, so [f(pD), V] = f(pD) V - V f(pD) is symmetric
  const auto f = polynomial({0.0, 0.3, 0.0, -1.0});
  for (int m : {3, 10, 25})
    for (double p : {1.0, 0.1}) {
      const auto pm = build_paper_matrices(m);
      const auto s = commutator(pm.D.scaled(p).apply(f), pm.V);
      EXPECT_LT(frobenius_distance(s, s.transpose()), 1e-13 * s.frobenius_norm()) << m << " " << p;
    }
}
