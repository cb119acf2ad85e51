#include "unispace/smoothfn.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unispace {

using Node = SmoothFn::Node;
using Kind = SmoothFn::Kind;

namespace {

struct GaussRule {
  std::array<double, 64> t{};
  std::array<double, 64> w{};
};

// 64-point Gauss-Legendre on [0, 1].
const GaussRule& gauss01() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 64>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    GaussRule r;
    size_t p = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      r.t[p] = 0.5 * (1.0 - x[i]);
      r.w[p++] = 0.5 * w[i];
      r.t[p] = 0.5 * (1.0 + x[i]);
      r.w[p++] = 0.5 * w[i];
    }
    if (p != 64) throw std::logic_error("unexpected Gauss rule layout");
    return r;
  }();
  return rule;
}

std::shared_ptr<Node> make(Kind k, int arity) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->arity = arity;
  return n;
}

void check_arity(const SmoothFn& a, const SmoothFn& b) {
  if (a.arity() != b.arity())
    throw ExprError("arity mismatch: " + std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::vector<double> displacement(const Node& n, std::span<const double> x) {
  std::vector<double> d(n.arity);
  for (int i = 0; i < n.arity; ++i) {
    d[i] = x[i] - n.dcenter[i];
    if (!n.periodic.empty() && n.periodic[i]) d[i] -= std::nearbyint(d[i]);
  }
  return d;
}

double norm(const std::vector<double>& d) {
  double s = 0.0;
  for (double v : d) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double bump_profile(double t, double r0, double r1) {
  if (t <= r0) return 1.0;
  if (t >= r1) return 0.0;
  double s = (t - r0) / (r1 - r0);
  double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

double bump_profile_derivative(double t, double r0, double r1) {
  if (t <= r0 || t >= r1) return 0.0;
  double s = (t - r0) / (r1 - r0);
  double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  double v = std::exp(1.0 - 1.0 / q);
  if (v == 0.0) return 0.0;
  return v * (-2.0 * s / (q * q)) / (r1 - r0);
}

SmoothFn::SmoothFn() : SmoothFn(polynomial(Polynomial(0))) {}

SmoothFn SmoothFn::polynomial(Polynomial p) {
  auto n = make(Kind::Poly, p.arity());
  for (const auto& [e, c] : p.terms()) {
    n->dcoef.push_back(c.get_d());
    n->dexp.push_back(e);
  }
  n->poly = std::move(p);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::constant(int arity, const Rational& c) { return polynomial(Polynomial::constant(arity, c)); }
SmoothFn SmoothFn::coordinate(int arity, int i) { return polynomial(Polynomial::coordinate(arity, i)); }
SmoothFn SmoothFn::pi(int arity) { return SmoothFn(make(Kind::Pi, arity)); }

SmoothFn SmoothFn::bump(const Rational& r0, const Rational& r1, std::vector<Rational> center,
                        std::vector<bool> periodic) {
  if (!(sgn(r0) >= 0 && r0 < r1)) throw ExprError("bump needs 0 <= r0 < r1");
  if (!periodic.empty() && periodic.size() != center.size()) throw ExprError("bump periodic mask length != arity");
  bool any = false;
  for (bool b : periodic) any = any || b;
  auto n = make(Kind::Bump, static_cast<int>(center.size()));
  n->r0 = r0;
  n->r1 = r1;
  n->dr0 = r0.get_d();
  n->dr1 = r1.get_d();
  n->dcenter = to_double(center);
  n->center = std::move(center);
  if (any) n->periodic = std::move(periodic);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::cone(const SmoothFn& f, int k, std::vector<Rational> center) {
  if (k < 1) throw ExprError("cone needs k >= 1");
  if (static_cast<int>(center.size()) != f.arity()) throw ExprError("cone center length != arity");
  if (f.is_polynomial()) return polynomial(f.poly().integrate_scaled(k, center));
  auto n = make(Kind::Cone, f.arity());
  n->kids = {f};
  n->ipow = k;
  n->dcenter = to_double(center);
  n->center = std::move(center);
  return SmoothFn(std::move(n));
}

SmoothFn SmoothFn::compose(const SmoothFn& outer, std::vector<SmoothFn> inner) {
  if (static_cast<int>(inner.size()) != outer.arity())
    throw ExprError("compose: outer arity " + std::to_string(outer.arity()) + " but " +
                    std::to_string(inner.size()) + " inner functions");
  if (inner.empty()) throw ExprError("compose needs at least one inner function");
  const int m = inner[0].arity();
  bool all_poly = outer.is_polynomial();
  for (const auto& g : inner) {
    if (g.arity() != m) throw ExprError("compose: inner arities differ");
    all_poly = all_poly && g.is_polynomial();
  }
  if (all_poly) {
    std::vector<Polynomial> gp;
    for (const auto& g : inner) gp.push_back(g.poly());
    return polynomial(outer.poly().compose(gp));
  }
  if (outer.is_polynomial() && outer.poly().is_constant()) return constant(m, outer.poly().constant_term());
  auto n = make(Kind::Compose, m);
  n->kids.push_back(outer);
  for (auto& g : inner) n->kids.push_back(std::move(g));
  return SmoothFn(std::move(n));
}

int SmoothFn::arity() const { return n_->arity; }
SmoothFn::Kind SmoothFn::kind() const { return n_->kind; }
bool SmoothFn::is_polynomial() const { return n_->kind == Kind::Poly; }
bool SmoothFn::is_zero() const { return n_->kind == Kind::Poly && n_->poly.is_zero(); }

const Polynomial& SmoothFn::poly() const {
  if (!is_polynomial()) throw ExprError("expression is not a polynomial");
  return n_->poly;
}

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b) {
  check_arity(a, b);
  if (a.is_polynomial() && b.is_polynomial()) return SmoothFn::polynomial(a.poly() + b.poly());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto n = make(Kind::Add, a.arity());
  n->kids = {a, b};
  return SmoothFn(std::move(n));
}

SmoothFn operator-(const SmoothFn& a) {
  if (a.is_polynomial()) return SmoothFn::polynomial(-a.poly());
  return SmoothFn::constant(a.arity(), -1) * a;
}

SmoothFn operator-(const SmoothFn& a, const SmoothFn& b) { return a + (-b); }

SmoothFn operator*(const SmoothFn& a, const SmoothFn& b) {
  check_arity(a, b);
  if (a.is_polynomial() && b.is_polynomial()) return SmoothFn::polynomial(a.poly() * b.poly());
  if (a.is_zero() || b.is_zero()) return SmoothFn::constant(a.arity(), 0);
  auto is_one = [](const SmoothFn& f) {
    return f.is_polynomial() && f.poly().is_constant() && f.poly().constant_term() == 1;
  };
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (b.is_polynomial() && !a.is_polynomial()) return b * a;
  if (a.is_polynomial() && b.kind() == Kind::Mul && b.node()->kids[0].is_polynomial())
    return (a * b.node()->kids[0]) * b.node()->kids[1];
  auto n = make(Kind::Mul, a.arity());
  n->kids = {a, b};
  return SmoothFn(std::move(n));
}

SmoothFn operator*(const Rational& s, const SmoothFn& a) { return SmoothFn::constant(a.arity(), s) * a; }

SmoothFn operator/(const SmoothFn& a, const SmoothFn& b) {
  check_arity(a, b);
  if (b.is_polynomial() && b.poly().is_constant()) {
    Rational c = b.poly().constant_term();
    if (sgn(c) == 0) throw ExprError("division by the zero constant");
    return Rational(1 / c) * a;
  }
  return a * pow(b, -1);
}

SmoothFn pow(const SmoothFn& a, int e) {
  if (e == 0) return SmoothFn::constant(a.arity(), 1);
  if (e == 1) return a;
  if (a.is_polynomial()) {
    if (e > 0) return SmoothFn::polynomial(a.poly().pow(e));
    if (a.poly().is_constant()) {
      Rational c = a.poly().constant_term();
      if (sgn(c) == 0) throw ExprError("negative power of zero");
      Rational r = 1;
      for (int i = 0; i < -e; ++i) r /= c;
      return SmoothFn::constant(a.arity(), r);
    }
  }
  auto n = make(Kind::Pow, a.arity());
  n->kids = {a};
  n->ipow = e;
  return SmoothFn(std::move(n));
}

SmoothFn sin(const SmoothFn& a) {
  if (a.is_zero()) return a;
  auto n = make(Kind::Sin, a.arity());
  n->kids = {a};
  return SmoothFn(std::move(n));
}

SmoothFn cos(const SmoothFn& a) {
  if (a.is_zero()) return SmoothFn::constant(a.arity(), 1);
  auto n = make(Kind::Cos, a.arity());
  n->kids = {a};
  return SmoothFn(std::move(n));
}

namespace {

double eval_node(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case Kind::Poly: {
      double s = 0.0;
      for (size_t t = 0; t < n.dcoef.size(); ++t) {
        double m = n.dcoef[t];
        const auto& e = n.dexp[t];
        for (int i = 0; i < n.arity; ++i)
          if (e[i]) m *= ipow(x[i], e[i]);
        s += m;
      }
      return s;
    }
    case Kind::Pi: return std::numbers::pi;
    case Kind::Add: return n.kids[0].eval(x) + n.kids[1].eval(x);
    case Kind::Mul: {
      double a = n.kids[0].eval(x);
      if (a == 0.0) return 0.0;
      return a * n.kids[1].eval(x);
    }
    case Kind::Pow: return std::pow(n.kids[0].eval(x), n.ipow);
    case Kind::Sin: return std::sin(n.kids[0].eval(x));
    case Kind::Cos: return std::cos(n.kids[0].eval(x));
    case Kind::Bump: return bump_profile(norm(displacement(n, x)), n.dr0, n.dr1);
    case Kind::BumpGrad: {
      auto d = displacement(n, x);
      double t = norm(d);
      double db = bump_profile_derivative(t, n.dr0, n.dr1);
      return db == 0.0 ? 0.0 : db * d[n.ipow] / t;
    }
    case Kind::Cone: {
      const auto& g = gauss01();
      std::vector<double> y(n.arity);
      double s = 0.0;
      for (size_t q = 0; q < 64; ++q) {
        const double t = g.t[q];
        for (int i = 0; i < n.arity; ++i) y[i] = n.dcenter[i] + t * (x[i] - n.dcenter[i]);
        s += g.w[q] * ipow(t, n.ipow - 1) * n.kids[0].eval(y);
      }
      return s;
    }
    case Kind::Compose: {
      std::vector<double> y(n.kids.size() - 1);
      for (size_t i = 1; i < n.kids.size(); ++i) y[i - 1] = n.kids[i].eval(x);
      return n.kids[0].eval(y);
    }
  }
  throw std::logic_error("unknown node kind");
}

double eval_grad_node(const Node& n, std::span<const double> x, std::span<double> g) {
  const int ar = n.arity;
  std::fill(g.begin(), g.begin() + ar, 0.0);
  switch (n.kind) {
    case Kind::Poly: {
      double s = 0.0;
      for (size_t t = 0; t < n.dcoef.size(); ++t) {
        const auto& e = n.dexp[t];
        double m = n.dcoef[t];
        for (int i = 0; i < ar; ++i)
          if (e[i]) m *= ipow(x[i], e[i]);
        s += m;
        for (int a = 0; a < ar; ++a) {
          if (!e[a]) continue;
          double p = n.dcoef[t] * e[a];
          for (int i = 0; i < ar; ++i) {
            int ei = i == a ? e[i] - 1 : e[i];
            if (ei) p *= ipow(x[i], ei);
          }
          g[a] += p;
        }
      }
      return s;
    }
    case Kind::Pi: return std::numbers::pi;
    case Kind::Add: {
      std::vector<double> h(ar);
      double a = n.kids[0].eval_grad(x, g);
      double b = n.kids[1].eval_grad(x, h);
      for (int i = 0; i < ar; ++i) g[i] += h[i];
      return a + b;
    }
    case Kind::Mul: {
      std::vector<double> ga(ar), gb(ar);
      double a = n.kids[0].eval_grad(x, ga);
      double b = n.kids[1].eval_grad(x, gb);
      for (int i = 0; i < ar; ++i) g[i] = a * gb[i] + b * ga[i];
      return a * b;
    }
    case Kind::Pow: {
      double a = n.kids[0].eval_grad(x, g);
      double f = n.ipow * std::pow(a, n.ipow - 1);
      for (int i = 0; i < ar; ++i) g[i] *= f;
      return std::pow(a, n.ipow);
    }
    case Kind::Sin: {
      double a = n.kids[0].eval_grad(x, g);
      double c = std::cos(a);
      for (int i = 0; i < ar; ++i) g[i] *= c;
      return std::sin(a);
    }
    case Kind::Cos: {
      double a = n.kids[0].eval_grad(x, g);
      double s = -std::sin(a);
      for (int i = 0; i < ar; ++i) g[i] *= s;
      return std::cos(a);
    }
    case Kind::Bump: {
      auto d = displacement(n, x);
      double t = norm(d);
      double db = bump_profile_derivative(t, n.dr0, n.dr1);
      if (db != 0.0)
        for (int i = 0; i < ar; ++i) g[i] = db * d[i] / t;
      return bump_profile(t, n.dr0, n.dr1);
    }
    case Kind::BumpGrad:
      throw ExprError("second derivatives of bump cutoffs are not provided");
    case Kind::Cone: {
      const auto& rule = gauss01();
      std::vector<double> y(ar), h(ar);
      double s = 0.0;
      for (size_t q = 0; q < 64; ++q) {
        const double t = rule.t[q];
        for (int i = 0; i < ar; ++i) y[i] = n.dcenter[i] + t * (x[i] - n.dcenter[i]);
        double tk = ipow(t, n.ipow - 1);
        s += rule.w[q] * tk * n.kids[0].eval_grad(y, h);
        for (int i = 0; i < ar; ++i) g[i] += rule.w[q] * tk * t * h[i];
      }
      return s;
    }
    case Kind::Compose: {
      const size_t m = n.kids.size() - 1;
      std::vector<double> y(m), gy(m);
      std::vector<std::vector<double>> J(m, std::vector<double>(ar));
      for (size_t b = 0; b < m; ++b) y[b] = n.kids[b + 1].eval_grad(x, J[b]);
      double v = n.kids[0].eval_grad(y, gy);
      for (size_t b = 0; b < m; ++b)
        if (gy[b] != 0.0)
          for (int i = 0; i < ar; ++i) g[i] += gy[b] * J[b][i];
      return v;
    }
  }
  throw std::logic_error("unknown node kind");
}

}  // namespace

double SmoothFn::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < arity()) throw ExprError("point has fewer coordinates than the arity");
  return eval_node(*n_, x);
}

Rational SmoothFn::eval_exact(const std::vector<Rational>& x) const { return poly().eval_exact(x); }

double SmoothFn::eval_grad(std::span<const double> x, std::span<double> grad) const {
  if (static_cast<int>(x.size()) < arity() || static_cast<int>(grad.size()) < arity())
    throw ExprError("point or gradient buffer shorter than the arity");
  return eval_grad_node(*n_, x, grad);
}

std::vector<double> SmoothFn::grad(std::span<const double> x) const {
  std::vector<double> g(arity());
  eval_grad(x, g);
  return g;
}

SmoothFn SmoothFn::partial(int i) const {
  const Node& n = *n_;
  if (i < 0 || i >= n.arity) throw ExprError("derivative index outside arity");
  switch (n.kind) {
    case Kind::Poly: return polynomial(n.poly.diff(i));
    case Kind::Pi: return constant(n.arity, 0);
    case Kind::Add: return n.kids[0].partial(i) + n.kids[1].partial(i);
    case Kind::Mul: return n.kids[0].partial(i) * n.kids[1] + n.kids[0] * n.kids[1].partial(i);
    case Kind::Pow:
      return Rational(n.ipow) * (pow(n.kids[0], n.ipow - 1) * n.kids[0].partial(i));
    case Kind::Sin: return cos(n.kids[0]) * n.kids[0].partial(i);
    case Kind::Cos: return -(sin(n.kids[0]) * n.kids[0].partial(i));
    case Kind::Bump: {
      auto g = std::make_shared<Node>(n);
      g->kind = Kind::BumpGrad;
      g->ipow = i;
      return SmoothFn(std::move(g));
    }
    case Kind::BumpGrad: throw ExprError("second derivatives of bump cutoffs are not provided");
    case Kind::Cone: return cone(n.kids[0].partial(i), n.ipow + 1, n.center);
    case Kind::Compose: {
      std::vector<SmoothFn> inner(n.kids.begin() + 1, n.kids.end());
      SmoothFn s = constant(n.arity, 0);
      for (size_t b = 0; b < inner.size(); ++b) {
        SmoothFn di = inner[b].partial(i);
        if (di.is_zero()) continue;
        s = s + compose(n.kids[0].partial(static_cast<int>(b)), inner) * di;
      }
      return s;
    }
  }
  throw std::logic_error("unknown node kind");
}

SmoothFn SmoothFn::with_arity(int m) const {
  if (m < arity()) throw ExprError("with_arity cannot drop coordinates");
  if (m == arity()) return *this;
  if (kind() == Kind::Pi) return pi(m);
  if (is_polynomial()) {
    std::vector<int> slot(arity());
    for (int i = 0; i < arity(); ++i) slot[i] = i;
    return polynomial(poly().reindex(m, slot));
  }
  std::vector<SmoothFn> inner;
  for (int i = 0; i < arity(); ++i) inner.push_back(coordinate(m, i));
  if (inner.empty()) return *this;
  return compose(*this, inner);
}

}  // namespace unispace
