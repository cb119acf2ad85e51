#pragma once

#include "unispace/polynomial.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unispace {

struct ExprError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Smooth scalar function of `arity` chart coordinates, stored as an immutable
// expression tree. Polynomial subtrees are folded into a single exact node.
class SmoothFn {
 public:
  enum class Kind { Poly, Pi, Add, Mul, Pow, Sin, Cos, Bump, BumpGrad, Cone, Compose };
  struct Node;

  SmoothFn();  // the zero function of arity 0

  static SmoothFn constant(int arity, const Rational& c);
  static SmoothFn coordinate(int arity, int i);
  static SmoothFn polynomial(Polynomial p);
  static SmoothFn pi(int arity);
  // 1 for t <= r0, 0 for t >= r1, exp(1 - 1/(1 - s^2)) with s = (t - r0)/(r1 - r0) between;
  // t is the distance to center (minimal image along periodic axes, period 1).
  static SmoothFn bump(const Rational& r0, const Rational& r1, std::vector<Rational> center,
                       std::vector<bool> periodic = {});
  // integral_0^1 t^{k-1} f(c + t (x - c)) dt; exact for polynomial f.
  static SmoothFn cone(const SmoothFn& f, int k, std::vector<Rational> center);
  // outer(inner_1(x), ..., inner_m(x)); outer has arity m.
  static SmoothFn compose(const SmoothFn& outer, std::vector<SmoothFn> inner);

  friend SmoothFn operator+(const SmoothFn& a, const SmoothFn& b);
  friend SmoothFn operator-(const SmoothFn& a, const SmoothFn& b);
  friend SmoothFn operator*(const SmoothFn& a, const SmoothFn& b);
  friend SmoothFn operator/(const SmoothFn& a, const SmoothFn& b);
  friend SmoothFn operator-(const SmoothFn& a);
  friend SmoothFn operator*(const Rational& s, const SmoothFn& a);
  friend SmoothFn pow(const SmoothFn& a, int e);
  friend SmoothFn sin(const SmoothFn& a);
  friend SmoothFn cos(const SmoothFn& a);

  int arity() const;
  Kind kind() const;
  bool is_polynomial() const;
  bool is_zero() const;  // structurally zero
  const Polynomial& poly() const;
  const Node* node() const { return n_.get(); }

  double eval(std::span<const double> x) const;
  Rational eval_exact(const std::vector<Rational>& x) const;
  // Value and gradient by forward-mode differentiation of the tree.
  double eval_grad(std::span<const double> x, std::span<double> grad) const;
  std::vector<double> grad(std::span<const double> x) const;

  SmoothFn partial(int i) const;
  // Same function seen as a function of m >= arity coordinates (the extra ones ignored).
  SmoothFn with_arity(int m) const;

  using NameMap = std::map<const Node*, std::string>;
  using Env = std::map<std::string, SmoothFn>;
  std::string to_string(const NameMap* names = nullptr) const;
  static SmoothFn parse(std::string_view text, int arity, const Env* env = nullptr);

  bool same_node(const SmoothFn& o) const { return n_ == o.n_; }

 private:
  explicit SmoothFn(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;

  friend struct SmoothFnAccess;
};

struct SmoothFn::Node {
  Kind kind = Kind::Poly;
  int arity = 0;
  Polynomial poly;
  std::vector<double> dcoef;      // Poly: floating copies of the coefficients
  std::vector<Exponents> dexp;    // Poly: matching exponent vectors
  std::vector<SmoothFn> kids;
  int ipow = 0;                   // Pow exponent, Cone degree k, BumpGrad axis
  Rational r0, r1;                // Bump radii
  std::vector<Rational> center;   // Bump / Cone center
  std::vector<double> dcenter;
  std::vector<bool> periodic;
  double dr0 = 0.0, dr1 = 0.0;
};

double bump_profile(double t, double r0, double r1);
double bump_profile_derivative(double t, double r0, double r1);

}  // namespace unispace
