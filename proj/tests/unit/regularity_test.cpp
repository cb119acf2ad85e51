#include "testing.hpp"
#include "unispace/linalg.hpp"
#include "unispace/regularity.hpp"

#include <gtest/gtest.h>

using namespace unispace;
using namespace unispace::testing;

TEST(Formulas, DeltaAgreesWithBlockCount) {
  for (int k = 3; k <= 5; ++k)
    for (int l = k; l <= k + 5; ++l) {
      Staircase s = staircase_embedding(l, k, false);
      EXPECT_EQ(Integer(s.map.rows / k), delta(l, k)) << "l=" << l << " k=" << k;
      EXPECT_EQ(s.map.cols, l);
    }
}

TEST(Formulas, SmallValues) {
  EXPECT_EQ(delta(3, 3), 1);
  EXPECT_EQ(delta(4, 3), 3);
  EXPECT_EQ(s_dim(3, 3), 19);
  EXPECT_EQ(s_dim(4, 3), 19);
  EXPECT_EQ(s_dim(5, 3), 25);
  EXPECT_EQ(n1(3, 3), 3);
  EXPECT_EQ(n1_bar(3, 3), 36);
  // q = [2m/(k-1)] = 3: 19 + 8 - 3 + 2*3*2/2 + 3*4*C(4,3)
  EXPECT_EQ(d_dim(3, 3), 19 + 8 - 3 + 6 + 48);
}

TEST(Formulas, DomainErrors) {
  EXPECT_THROW(delta(2, 3), DomainError);
  EXPECT_THROW(s_dim(2, 3), DomainError);
  EXPECT_THROW(d_dim(3, 2), DomainError);
  EXPECT_THROW(n1(1, 3), DomainError);
}

TEST(Regularity, NegativeControl) {
  auto c = is_regular(standard_beta<Rational>(2, 3), Subspace::coordinate(6, {0, 1, 3, 4}));
  EXPECT_FALSE(c.regular);
  EXPECT_EQ(c.achieved_rank, 2);
  EXPECT_EQ(c.required_rank, 6);
}

TEST(Regularity, ContractionRowsAreInteriorProducts) {
  std::mt19937_64 rng(51);
  auto beta = random_altform(rng, 6, 3);
  auto T = random_matrix(rng, 6, 4);
  auto M = contraction_matrix(beta, T);
  const auto cols = enumerate_tuples(4, 2);
  for (int a = 0; a < 6; ++a)
    for (size_t j = 0; j < cols.size(); ++j) {
      // (e_a _| beta)(T u, T v) = beta(e_a, T u, T v)
      Rational oracle(0);
      for (const auto& [I, c] : beta.coefficients()) {
        Matrix<Rational> m(3, 3);
        for (int r = 0; r < 3; ++r) {
          m(r, 0) = I[r] == a ? 1 : 0;
          m(r, 1) = T(I[r], cols[j][0]);
          m(r, 2) = T(I[r], cols[j][1]);
        }
        oracle += c * leibniz_det(m);
      }
      EXPECT_EQ(M(a, static_cast<int>(j)), oracle);
    }
}

TEST(Regularity, StaircaseCertifiesForDegreeThree) {
  for (int l = 3; l <= 9; ++l) {
    Staircase s = build_regular_subspace(l, 3);
    EXPECT_TRUE(s.certificate.regular);
    EXPECT_EQ(Integer(s.certificate.achieved_rank), binomial(l, 2));
    EXPECT_EQ(exact_rank(s.map), l);
  }
}

TEST(Regularity, BaseStageIsIdentity) {
  Staircase s = build_regular_subspace(3, 3);
  EXPECT_EQ(s.map.rows, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_EQ(s.map(r, c), r == c ? 1 : 0);
}

TEST(Regularity, NumericAgreesWithExact) {
  Staircase s = build_regular_subspace(6, 3);
  auto nr = is_regular_numeric(to_double(s.certificate.form), to_double(s.map));
  EXPECT_TRUE(nr.regular);
  EXPECT_EQ(nr.rank, 15);
}

TEST(FormalMonomorphism, PullbackIdentityAndInjectivity) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 5; ++t) {
    auto g = random_altform(rng, 4, 3);
    auto f = formal_monomorphism(g);
    EXPECT_EQ(pullback_linear(f.s, f.beta_target), g);
    EXPECT_TRUE(f.identity_holds);
    EXPECT_EQ(exact_rank(f.s), 4);
    EXPECT_TRUE(f.certificate.regular);
  }
}

TEST(FormalMonomorphism, ZeroForm) {
  auto f = formal_monomorphism(AltForm<Rational>(4, 3));
  EXPECT_TRUE(f.identity_holds);
  EXPECT_TRUE(f.injective);
}
