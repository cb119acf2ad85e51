#pragma once

#include "unispace/rational.hpp"

#include <map>
#include <vector>

namespace unispace {

using Exponents = std::vector<int>;

// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  explicit Polynomial(int arity = 0) : n_(arity) {}

  static Polynomial constant(int arity, const Rational& c);
  static Polynomial coordinate(int arity, int i);

  int arity() const { return n_; }
  const std::map<Exponents, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int total_degree() const;

  void add_term(const Exponents& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, const Polynomial& a);
  bool operator==(const Polynomial& o) const { return n_ == o.n_ && t_ == o.t_; }

  Polynomial pow(int e) const;
  Polynomial diff(int i) const;
  // p(x + c)
  Polynomial shift(const std::vector<Rational>& c) const;
  // integral_0^1 t^{k-1} p(c + t (x - c)) dt
  Polynomial integrate_scaled(int k, const std::vector<Rational>& center) const;
  // p(g_1(y), ..., g_n(y)); every g_i has the same arity
  Polynomial compose(const std::vector<Polynomial>& g) const;
  // Same polynomial viewed on m >= arity coordinates, placing x_i at slot map[i].
  Polynomial reindex(int m, const std::vector<int>& slot) const;

  Rational eval_exact(const std::vector<Rational>& x) const;

 private:
  int n_;
  std::map<Exponents, Rational> t_;
};

}  // namespace unispace
