#include "testing.hpp"

#include <gtest/gtest.h>

using namespace unispace;
using namespace unispace::testing;

namespace {

std::vector<Rational> random_point(std::mt19937_64& rng, int n) {
  std::vector<Rational> x(n);
  for (auto& v : x) v = random_rational(rng);
  return x;
}

}  // namespace

TEST(Polynomial, RingOperationsAgreeWithEvaluation) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto p = random_polynomial(rng, 3), q = random_polynomial(rng, 3);
    auto x = random_point(rng, 3);
    EXPECT_EQ((p * q).eval_exact(x), p.eval_exact(x) * q.eval_exact(x));
    EXPECT_EQ((p - q).eval_exact(x), p.eval_exact(x) - q.eval_exact(x));
    EXPECT_EQ(p.pow(3).eval_exact(x), p.eval_exact(x) * p.eval_exact(x) * p.eval_exact(x));
  }
}

TEST(Polynomial, DerivativeOfMonomial) {
  Polynomial p(2);
  p.add_term({3, 2}, Rational(5, 7));
  Polynomial d = p.diff(0);
  EXPECT_EQ(d.terms().size(), 1u);
  EXPECT_EQ(d.terms().at({2, 2}), Rational(15, 7));
  EXPECT_TRUE(Polynomial::constant(2, 4).diff(1).is_zero());
}

TEST(Polynomial, ShiftAndCompose) {
  std::mt19937_64 rng(32);
  auto p = random_polynomial(rng, 2, 3, 4);
  std::vector<Rational> c = {Rational(1, 2), Rational(-2)};
  auto x = random_point(rng, 2);
  EXPECT_EQ(p.shift(c).eval_exact(x), p.eval_exact({x[0] + c[0], x[1] + c[1]}));
  auto g0 = random_polynomial(rng, 3), g1 = random_polynomial(rng, 3);
  auto y = random_point(rng, 3);
  EXPECT_EQ(p.compose({g0, g1}).eval_exact(y), p.eval_exact({g0.eval_exact(y), g1.eval_exact(y)}));
}

// integral_0^1 t^{k-1} p(c + t (x - c)) dt, against term-by-term expansion in t.
TEST(Polynomial, ScaledIntegralMatchesExpansionInT) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_polynomial(rng, 2, 3, 4);
    const int k = 1 + trial % 3;
    std::vector<Rational> c = {random_rational(rng), random_rational(rng)};
    auto x = random_point(rng, 2);
    // p(c + t (x - c)) as a polynomial in t.
    Polynomial line = p.compose({Polynomial::constant(1, c[0]) + (x[0] - c[0]) * Polynomial::coordinate(1, 0),
                                 Polynomial::constant(1, c[1]) + (x[1] - c[1]) * Polynomial::coordinate(1, 0)});
    Rational oracle(0);
    for (const auto& [e, v] : line.terms()) oracle += v / (e[0] + k);
    EXPECT_EQ(p.integrate_scaled(k, c).eval_exact(x), oracle);
  }
}

TEST(Polynomial, Reindex) {
  Polynomial p(2);
  p.add_term({1, 2}, 3);
  Polynomial q = p.reindex(4, {3, 1});
  EXPECT_EQ(q.eval_exact({5, 2, 7, 11}), 3 * 11 * 2 * 2);
}
