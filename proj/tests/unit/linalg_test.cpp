#include "testing.hpp"
#include "unispace/linalg.hpp"

#include <gtest/gtest.h>

using namespace unispace;
using namespace unispace::testing;

namespace {

// Plain Gauss-Jordan over the rationals.
int gauss_rank(Matrix<Rational> m) {
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int p = rank;
    while (p < m.rows && m(p, c) == 0) ++p;
    if (p == m.rows) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(rank, j));
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m(r, c) == 0) continue;
      Rational f = m(r, c) / m(rank, c);
      for (int j = 0; j < m.cols; ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(ExactRank, MatchesGaussJordan) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 2 + trial % 6, c = 2 + (trial / 3) % 6;
    auto m = random_matrix(rng, r, c);
    if (trial % 4 == 0 && r > 2)
      for (int j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 3 - m(1, j) / 2;
    if (trial % 5 == 0)
      for (int i = 0; i < r; ++i) m(i, 0) = 0;
    EXPECT_EQ(exact_rank(m), gauss_rank(m)) << "trial " << trial;
  }
}

TEST(ExactRank, EdgeCases) {
  EXPECT_EQ(exact_rank(Matrix<Rational>(3, 4)), 0);
  EXPECT_EQ(exact_rank(Matrix<Rational>::identity(5)), 5);
  Matrix<Rational> tiny(2, 2);
  tiny(0, 0) = Rational(1, 1000000007);
  tiny(1, 1) = Rational(1, 999999937);
  EXPECT_EQ(exact_rank(tiny), 2);
}

TEST(NumericRank, ThresholdAndConditioning) {
  Matrix<double> m(3, 3);
  m(0, 0) = 4;
  m(1, 1) = 2;
  m(2, 2) = 1e-12;
  auto r = numeric_rank(m);
  EXPECT_EQ(r.rank, 2);
  EXPECT_DOUBLE_EQ(r.sigma_max, 4);
  EXPECT_DOUBLE_EQ(r.sigma_min_retained, 2);
  EXPECT_NEAR(r.condition, 2, 1e-12);
  EXPECT_NEAR(r.sigma_next, 1e-12, 1e-20);
}

TEST(NumericRank, SingularValuesOfRotationTimesDiagonal) {
  const double c = std::cos(0.3), s = std::sin(0.3);
  Matrix<double> m(2, 2);
  m.data = {3 * c, -s, 3 * s, c};
  auto sv = singular_values(m);
  ASSERT_EQ(sv.size(), 2u);
  EXPECT_NEAR(sv[0], 3, 1e-12);
  EXPECT_NEAR(sv[1], 1, 1e-12);
}
