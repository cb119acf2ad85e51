#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace unispace {

using Rational = mpq_class;
using Integer = mpz_class;

Rational rational_from_double(double v);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
double to_double(const Rational& q);

std::vector<double> to_double(const std::vector<Rational>& v);

template <class S>
S scalar_from(const Rational& q);

template <>
inline Rational scalar_from<Rational>(const Rational& q) { return q; }

template <>
inline double scalar_from<double>(const Rational& q) { return q.get_d(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double v) { return v == 0.0; }

Integer binomial(long n, long k);

}  // namespace unispace
