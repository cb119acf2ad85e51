#pragma once

#include "unispace/forms.hpp"
#include "unispace/polynomial.hpp"

#include <random>

namespace unispace::testing {

inline Rational random_rational(std::mt19937_64& rng, int span = 5, int den = 3) {
  std::uniform_int_distribution<int> num(-span, span), d(1, den);
  Rational q(num(rng));
  return q / d(rng);
}

inline Polynomial random_polynomial(std::mt19937_64& rng, int arity, int max_degree = 2, int terms = 3) {
  Polynomial p(arity);
  std::uniform_int_distribution<int> e(0, max_degree), var(0, arity - 1);
  for (int t = 0; t < terms; ++t) {
    Exponents ex(arity, 0);
    int budget = e(rng);
    for (int b = 0; b < budget; ++b) ++ex[var(rng)];
    p.add_term(ex, random_rational(rng));
  }
  return p;
}

inline DifferentialForm random_form(std::mt19937_64& rng, int n, int k, int max_degree = 2) {
  DifferentialForm a(n, k);
  for (const auto& t : enumerate_tuples(n, k)) a.set(t, SmoothFn::polynomial(random_polynomial(rng, n, max_degree)));
  return a;
}

inline AltForm<Rational> random_altform(std::mt19937_64& rng, int d, int k) {
  AltForm<Rational> a(d, k);
  for (const auto& t : enumerate_tuples(d, k)) a.set(t, random_rational(rng));
  return a;
}

inline Matrix<Rational> random_matrix(std::mt19937_64& rng, int r, int c) {
  Matrix<Rational> m(r, c);
  for (auto& v : m.data) v = random_rational(rng);
  return m;
}

// Leibniz expansion: sum over permutations of sign * product.
template <class S>
S leibniz_det(const Matrix<S>& m) {
  std::vector<int> p(m.rows);
  for (int i = 0; i < m.rows; ++i) p[i] = i;
  S total(0);
  do {
    int inv = 0;
    for (int i = 0; i < m.rows; ++i)
      for (int j = i + 1; j < m.rows; ++j) inv += p[i] > p[j];
    S prod(1);
    for (int i = 0; i < m.rows; ++i) prod *= m(i, p[i]);
    total += inv % 2 ? S(-prod) : prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace unispace::testing
