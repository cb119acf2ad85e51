#include "unispace/polynomial.hpp"

#include <stdexcept>

namespace unispace {

Polynomial Polynomial::constant(int arity, const Rational& c) {
  Polynomial p(arity);
  p.add_term(Exponents(arity, 0), c);
  return p;
}

Polynomial Polynomial::coordinate(int arity, int i) {
  if (i < 0 || i >= arity) throw std::out_of_range("coordinate index outside arity");
  Polynomial p(arity);
  Exponents e(arity, 0);
  e[i] = 1;
  p.add_term(e, 1);
  return p;
}

bool Polynomial::is_constant() const {
  if (t_.empty()) return true;
  if (t_.size() > 1) return false;
  for (int e : t_.begin()->first)
    if (e) return false;
  return true;
}

Rational Polynomial::constant_term() const {
  auto it = t_.find(Exponents(n_, 0));
  return it == t_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : t_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent vector length != arity");
  if (sgn(c) == 0) return;
  auto [it, inserted] = t_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) t_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(n_);
  for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_ != n_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [e, c] : o.t_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.n_ != n_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [e, c] : o.t_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial r(a.n_);
  Exponents e(a.n_);
  for (const auto& [ea, ca] : a.t_)
    for (const auto& [eb, cb] : b.t_) {
      for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial operator*(const Rational& s, const Polynomial& a) {
  Polynomial r(a.n_);
  if (sgn(s) == 0) return r;
  for (const auto& [e, c] : a.t_) r.t_.emplace(e, s * c);
  return r;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power of a polynomial is not a polynomial");
  Polynomial result = constant(n_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::diff(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("derivative index outside arity");
  Polynomial r(n_);
  for (const auto& [e, c] : t_) {
    if (e[i] == 0) continue;
    Exponents f = e;
    --f[i];
    r.add_term(f, c * e[i]);
  }
  return r;
}

Polynomial Polynomial::shift(const std::vector<Rational>& c) const {
  if (static_cast<int>(c.size()) != n_) throw std::invalid_argument("shift vector length != arity");
  bool trivial = true;
  for (const auto& v : c)
    if (sgn(v) != 0) trivial = false;
  if (trivial) return *this;
  std::vector<Polynomial> g;
  for (int i = 0; i < n_; ++i) g.push_back(coordinate(n_, i) + constant(n_, c[i]));
  return compose(g);
}

Polynomial Polynomial::integrate_scaled(int k, const std::vector<Rational>& center) const {
  if (k < 1) throw std::invalid_argument("integrate_scaled needs k >= 1");
  Polynomial u = shift(center);
  Polynomial scaled(n_);
  for (const auto& [e, c] : u.t_) {
    int m = 0;
    for (int x : e) m += x;
    scaled.t_.emplace(e, c / Rational(m + k));
  }
  std::vector<Rational> neg(center.size());
  for (size_t i = 0; i < center.size(); ++i) neg[i] = -center[i];
  return scaled.shift(neg);
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& g) const {
  if (static_cast<int>(g.size()) != n_) throw std::invalid_argument("compose: need one inner polynomial per variable");
  int m = g.empty() ? 0 : g[0].arity();
  for (const auto& q : g)
    if (q.arity() != m) throw std::invalid_argument("compose: inner arities differ");
  std::vector<std::vector<Polynomial>> powers(n_);
  Polynomial r(m);
  for (const auto& [e, c] : t_) {
    Polynomial term = constant(m, c);
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(m, 1));
      while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * g[i]);
      term = term * pw[e[i]];
    }
    r += term;
  }
  return r;
}

Polynomial Polynomial::reindex(int m, const std::vector<int>& slot) const {
  if (static_cast<int>(slot.size()) != n_) throw std::invalid_argument("reindex: slot map length != arity");
  Polynomial r(m);
  Exponents f(m);
  for (const auto& [e, c] : t_) {
    std::fill(f.begin(), f.end(), 0);
    for (int i = 0; i < n_; ++i) {
      if (slot[i] < 0 || slot[i] >= m) throw std::out_of_range("reindex slot outside target arity");
      f[slot[i]] += e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

Rational Polynomial::eval_exact(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension != arity");
  Rational s = 0;
  for (const auto& [e, c] : t_) {
    Rational m = c;
    for (int i = 0; i < n_; ++i)
      for (int p = 0; p < e[i]; ++p) m *= x[i];
    s += m;
  }
  return s;
}

}  // namespace unispace
