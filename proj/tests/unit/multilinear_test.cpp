#include "testing.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace unispace;
using namespace unispace::testing;

namespace {

// a(v_1, ..., v_k) = sum_I a_I det(v[I]).
Rational evaluate(const AltForm<Rational>& a, const std::vector<std::vector<Rational>>& v) {
  Rational s(0);
  for (const auto& [I, c] : a.coefficients()) {
    Matrix<Rational> M(a.degree(), a.degree());
    for (int r = 0; r < a.degree(); ++r)
      for (int j = 0; j < a.degree(); ++j) M(r, j) = v[j][I[r]];
    s += c * leibniz_det(M);
  }
  return s;
}

std::vector<std::vector<Rational>> random_vectors(std::mt19937_64& rng, int count, int d) {
  std::vector<std::vector<Rational>> v(count, std::vector<Rational>(d));
  for (auto& x : v)
    for (auto& c : x) c = random_rational(rng);
  return v;
}

Rational factorial(int n) {
  Rational f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST(Tuples, EnumerationIsLexicographicAndComplete) {
  auto t = enumerate_tuples(5, 3);
  ASSERT_EQ(t.size(), 10u);
  EXPECT_EQ(t.front(), (IndexTuple{0, 1, 2}));
  EXPECT_EQ(t.back(), (IndexTuple{2, 3, 4}));
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_EQ(enumerate_tuples(3, 0).size(), 1u);
  EXPECT_TRUE(enumerate_tuples(2, 3).empty());
}

TEST(Tuples, KeysAreOneBased) {
  EXPECT_EQ(tuple_key({0, 2, 5}), "1,3,6");
  EXPECT_EQ(parse_tuple_key("1,3,6"), (IndexTuple{0, 2, 5}));
  EXPECT_THROW(parse_tuple_key("0,1"), std::invalid_argument);
}

TEST(Tuples, ShuffleSign) {
  IndexTuple m;
  EXPECT_EQ(shuffle_sign({1}, {0}, &m), -1);
  EXPECT_EQ(m, (IndexTuple{0, 1}));
  EXPECT_EQ(shuffle_sign({0, 2}, {1, 3}, &m), -1);
  EXPECT_EQ(shuffle_sign({2, 3}, {0, 1}, &m), 1);
  EXPECT_EQ(shuffle_sign({0, 1}, {1}, &m), 0);
}

TEST(AltForm, RejectsBadTuples) {
  AltForm<Rational> a(3, 2);
  EXPECT_THROW(a.set({1, 0}, 1), DimensionError);
  EXPECT_THROW(a.set({0, 3}, 1), DimensionError);
  EXPECT_THROW(a.set({0}, 1), DimensionError);
}

TEST(AltForm, WedgeMatchesAntisymmetrization) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 5, k = 1 + trial % 2, l = 1 + trial % 3;
    auto a = random_altform(rng, d, k);
    auto b = random_altform(rng, d, l);
    auto w = wedge(a, b);
    auto v = random_vectors(rng, k + l, d);
    std::vector<int> p(k + l);
    std::iota(p.begin(), p.end(), 0);
    Rational oracle(0);
    do {
      int inv = 0;
      for (int i = 0; i < k + l; ++i)
        for (int j = i + 1; j < k + l; ++j) inv += p[i] > p[j];
      std::vector<std::vector<Rational>> va, vb;
      for (int i = 0; i < k; ++i) va.push_back(v[p[i]]);
      for (int i = k; i < k + l; ++i) vb.push_back(v[p[i]]);
      Rational t = evaluate(a, va) * evaluate(b, vb);
      oracle += inv % 2 ? Rational(-t) : t;
    } while (std::next_permutation(p.begin(), p.end()));
    oracle /= factorial(k) * factorial(l);
    EXPECT_EQ(evaluate(w, v), oracle);
  }
}

TEST(AltForm, WedgeIsGradedCommutativeAndAssociative) {
  std::mt19937_64 rng(12);
  auto a = random_altform(rng, 6, 2), b = random_altform(rng, 6, 1), c = random_altform(rng, 6, 2);
  EXPECT_EQ(wedge(a, b), wedge(b, a));
  EXPECT_EQ(wedge(b, b), AltForm<Rational>(6, 2));
  EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
}

TEST(AltForm, InteriorMatchesFirstSlot) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_altform(rng, 5, 3);
    auto v = random_vectors(rng, 3, 5);
    std::vector<std::vector<Rational>> rest(v.begin() + 1, v.end());
    EXPECT_EQ(evaluate(interior(v[0], a), rest), evaluate(a, v));
  }
}

TEST(AltForm, InteriorIsAnAntiderivation) {
  std::mt19937_64 rng(14);
  auto a = random_altform(rng, 5, 2), b = random_altform(rng, 5, 2);
  std::vector<Rational> v(5);
  for (auto& c : v) c = random_rational(rng);
  EXPECT_EQ(interior(v, wedge(a, b)), wedge(interior(v, a), b) + wedge(a, interior(v, b)));
}

TEST(AltForm, PullbackMatchesComposition) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    auto L = random_matrix(rng, 6, 4);
    auto a = random_altform(rng, 6, 3);
    auto w = random_vectors(rng, 3, 4);
    std::vector<std::vector<Rational>> Lw;
    for (const auto& x : w) {
      std::vector<Rational> y(6, Rational(0));
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 4; ++c) y[r] += L(r, c) * x[c];
      Lw.push_back(y);
    }
    EXPECT_EQ(evaluate(pullback_linear(L, a), w), evaluate(a, Lw));
  }
}

TEST(AltForm, PullbackIsFunctorial) {
  std::mt19937_64 rng(16);
  auto A = random_matrix(rng, 5, 4), B = random_matrix(rng, 4, 3);
  auto a = random_altform(rng, 5, 2);
  EXPECT_EQ(pullback_linear(A * B, a), pullback_linear(B, pullback_linear(A, a)));
}

TEST(Matrix, DeterminantMatchesLeibniz) {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 5; ++n) {
    auto m = random_matrix(rng, n, n);
    EXPECT_EQ(determinant(m), leibniz_det(m));
  }
  Matrix<double> md(3, 3);
  md.data = {2, -1, 0, 1, 3, 4, 0.5, 2, 1};
  EXPECT_NEAR(determinant(md), leibniz_det(md), 1e-12);
}

TEST(StandardBeta, BlockStructure) {
  auto b = standard_beta<Rational>(3, 2);
  EXPECT_EQ(b.ambient_dim(), 6);
  EXPECT_EQ(b.coefficients().size(), 3u);
  EXPECT_EQ(b.coeff({2, 3}), 1);
  EXPECT_EQ(b.coeff({1, 2}), 0);
}
