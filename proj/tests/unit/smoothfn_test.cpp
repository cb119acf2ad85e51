#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace unispace;
using namespace unispace::testing;

namespace {

double central(const SmoothFn& f, std::vector<double> x, int i, double h = 1e-5) {
  x[i] += h;
  double a = f.eval(x);
  x[i] -= 2 * h;
  double b = f.eval(x);
  return (a - b) / (2 * h);
}

// Composite Simpson rule with many panels.
double simpson(const std::function<double(double)>& g, int panels = 2000) {
  const double h = 1.0 / panels;
  double s = g(0) + g(1);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * g(i * h);
  return s * h / 3;
}

}  // namespace

TEST(SmoothFn, ParseAndEvaluate) {
  auto f = SmoothFn::parse("sin(2*pi*x1) + x2^2*x3 - 3/4", 3);
  std::vector<double> x = {0.1, 0.5, -2};
  EXPECT_NEAR(f.eval(x), std::sin(2 * M_PI * 0.1) + 0.25 * -2 - 0.75, 1e-14);
  auto p = SmoothFn::parse("(x1 + 1/3)^3 - x2/2", 2);
  ASSERT_TRUE(p.is_polynomial());
  EXPECT_EQ(p.eval_exact({Rational(2, 3), Rational(1)}), Rational(1) - Rational(1, 2));
  EXPECT_EQ(SmoothFn::parse("1.25e-1*x1", 1).eval_exact({Rational(8)}), 1);
}

TEST(SmoothFn, PrintParseRoundTrip) {
  const char* exprs[] = {"cos(x1*x2)^2 - x3/(1 + x1^2)", "bump(1/4,1/2,1/2,1/2;1,0)*x2",
                         "cone(2;0,0;sin(x1)*x2)", "compose(sin(x1)*x2;x1 + x2,x1*x2)", "-pi*x1^3"};
  std::vector<double> x = {0.3, -0.7, 0.2};
  for (const char* e : exprs) {
    const int arity = std::string(e).find("x3") != std::string::npos ? 3 : 2;
    auto f = SmoothFn::parse(e, arity);
    auto g = SmoothFn::parse(f.to_string(), arity);
    std::vector<double> y(x.begin(), x.begin() + arity);
    EXPECT_NEAR(f.eval(y), g.eval(y), 1e-14) << e << " -> " << f.to_string();
    EXPECT_EQ(f.to_string(), g.to_string());
  }
}

TEST(SmoothFn, ParseErrors) {
  EXPECT_THROW(SmoothFn::parse("x4", 3), std::invalid_argument);
  EXPECT_THROW(SmoothFn::parse("sin(x1", 1), std::invalid_argument);
  EXPECT_THROW(SmoothFn::parse("$nope", 1), std::invalid_argument);
  EXPECT_THROW(SmoothFn::parse("x1 ++", 1), std::invalid_argument);
}

TEST(SmoothFn, GradientsMatchFiniteDifferences) {
  auto f = SmoothFn::parse("sin(x1*x2) * cos(x3) + x1^2/(2 + x2^2) + compose(sin(x1)*x2; x2 + x3, x1)", 3);
  std::vector<double> x = {0.4, -0.3, 1.1}, g(3);
  f.eval_grad(x, g);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(g[i], central(f, x, i), 1e-8);
    EXPECT_NEAR(f.partial(i).eval(x), g[i], 1e-12);
  }
}

TEST(SmoothFn, BumpProfile) {
  auto b = SmoothFn::bump(Rational(1, 4), Rational(1, 2), {Rational(0), Rational(0)});
  EXPECT_EQ(b.eval(std::vector<double>{0.2, 0.0}), 1.0);
  EXPECT_EQ(b.eval(std::vector<double>{0.0, 0.5}), 0.0);
  const double mid = b.eval(std::vector<double>{0.3, 0.2});
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
  std::vector<double> x = {0.3, 0.2}, g(2);
  b.eval_grad(x, g);
  EXPECT_NEAR(g[0], central(b, x, 0, 1e-6), 1e-6);
  EXPECT_NEAR(b.partial(1).eval(x), g[1], 1e-12);
  EXPECT_THROW(b.partial(0).partial(0), std::logic_error);
}

TEST(SmoothFn, PeriodicBumpUsesMinimalImage) {
  auto b = SmoothFn::bump(Rational(1, 10), Rational(1, 5), {Rational(1, 20), Rational(1, 2)}, {true, false});
  EXPECT_EQ(b.eval(std::vector<double>{0.98, 0.5}), 1.0);
  EXPECT_EQ(b.eval(std::vector<double>{0.98, 0.7}), 0.0);
}

TEST(SmoothFn, ConeMatchesSimpson) {
  auto f = SmoothFn::parse("sin(3*x1)*x2 + cos(x1*x2)", 2);
  std::vector<Rational> c = {Rational(1, 3), Rational(-1, 2)};
  for (int k = 1; k <= 3; ++k) {
    auto cone = SmoothFn::cone(f, k, c);
    std::vector<double> x = {0.9, 0.4};
    double oracle = simpson([&](double t) {
      std::vector<double> y = {1.0 / 3 + t * (x[0] - 1.0 / 3), -0.5 + t * (x[1] + 0.5)};
      return std::pow(t, k - 1) * f.eval(y);
    });
    EXPECT_NEAR(cone.eval(x), oracle, 1e-12);
    std::vector<double> g(2);
    cone.eval_grad(x, g);
    EXPECT_NEAR(g[0], central(cone, x, 0), 1e-8);
  }
}

TEST(SmoothFn, ConeOfPolynomialIsExact) {
  auto f = SmoothFn::parse("x1^2*x2 + 1", 2);
  auto cone = SmoothFn::cone(f, 2, {Rational(0), Rational(0)});
  ASSERT_TRUE(cone.is_polynomial());
  // integral_0^1 t (t^3 x1^2 x2 + 1) dt = x1^2 x2 / 5 + 1/2
  EXPECT_EQ(cone.eval_exact({Rational(2), Rational(3)}), Rational(12, 5) + Rational(1, 2));
}

TEST(SmoothFn, ComposeFoldsPolynomials) {
  auto outer = SmoothFn::parse("x1*x2 + x1", 2);
  auto h = SmoothFn::compose(outer, {SmoothFn::parse("x1 + 1", 1), SmoothFn::parse("x1^2", 1)});
  ASSERT_TRUE(h.is_polynomial());
  EXPECT_EQ(h.eval_exact({Rational(2)}), Rational(3 * 4 + 3));
}

TEST(SmoothFn, WithArityAndArityChecks) {
  auto f = SmoothFn::parse("sin(x1) + x2", 2);
  auto g = f.with_arity(4);
  EXPECT_EQ(g.arity(), 4);
  EXPECT_NEAR(g.eval(std::vector<double>{0.5, 2, 9, 9}), std::sin(0.5) + 2, 1e-15);
  EXPECT_THROW(f + SmoothFn::coordinate(3, 0), std::invalid_argument);
}
