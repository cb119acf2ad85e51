#pragma once

// Constant-coefficient alternating forms on R^d.
//
// A basis k-form dx^I is indexed by a strictly increasing tuple I (0-based
// internally, printed 1-based). Products of sorted tuples use the shuffle
// sign: dx^I ^ dx^J = (-1)^{#{(i,j) in IxJ : i > j}} dx^{I u J}.

#include "unispace/rational.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace unispace {

using IndexTuple = std::vector<int>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<IndexTuple> enumerate_tuples(int d, int k);
bool valid_tuple(const IndexTuple& t, int d);
std::string tuple_key(const IndexTuple& t);
IndexTuple parse_tuple_key(const std::string& key);

// Sign of the shuffle merging two disjoint sorted tuples; 0 if they overlap.
int shuffle_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple* merged);

template <class S>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<S> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, S(0)) {}

  S& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const S& operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::vector<S> column(int c) const {
    std::vector<S> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
  }

  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

template <class S>
using LinearMap = Matrix<S>;

template <class S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols != b.rows) throw DimensionError("matrix product dimension mismatch");
  Matrix<S> c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int l = 0; l < a.cols; ++l) {
      const S& x = a(i, l);
      if (is_zero(x)) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += x * b(l, j);
    }
  return c;
}

template <class S>
Matrix<S> stack_rows(const Matrix<S>& top, const Matrix<S>& bottom) {
  if (top.cols != bottom.cols) throw DimensionError("row stacking needs equal column counts");
  Matrix<S> m(top.rows + bottom.rows, top.cols);
  std::copy(top.data.begin(), top.data.end(), m.data.begin());
  std::copy(bottom.data.begin(), bottom.data.end(), m.data.begin() + top.data.size());
  return m;
}

template <class S>
Matrix<S> select_columns(const Matrix<S>& m, int first, int count) {
  Matrix<S> out(m.rows, count);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < count; ++c) out(r, c) = m(r, first + c);
  return out;
}

template <class S>
Matrix<double> to_double(const Matrix<S>& m) {
  Matrix<double> out(m.rows, m.cols);
  for (size_t i = 0; i < m.data.size(); ++i) {
    if constexpr (std::is_same_v<S, double>) out.data[i] = m.data[i];
    else out.data[i] = m.data[i].get_d();
  }
  return out;
}

// Determinant by Gaussian elimination; exact for Rational, partial pivoting for double.
template <class S>
S determinant(Matrix<S> m) {
  if (m.rows != m.cols) throw DimensionError("determinant of a non-square matrix");
  const int n = m.rows;
  S det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    if constexpr (std::is_same_v<S, double>) {
      double best = 0.0;
      for (int r = c; r < n; ++r)
        if (std::abs(m(r, c)) > best) { best = std::abs(m(r, c)); piv = r; }
    } else {
      for (int r = c; r < n; ++r)
        if (!is_zero(m(r, c))) { piv = r; break; }
    }
    if (piv < 0) return S(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (is_zero(m(r, c))) continue;
      S f = m(r, c) / m(c, c);
      for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class S>
class AltForm {
 public:
  AltForm(int ambient_dim, int degree) : d_(ambient_dim), k_(degree) {
    if (d_ < 0 || k_ < 0) throw DimensionError("negative dimension or degree");
  }

  int ambient_dim() const { return d_; }
  int degree() const { return k_; }
  bool is_zero() const { return c_.empty(); }
  const std::map<IndexTuple, S>& coefficients() const { return c_; }

  S coeff(const IndexTuple& t) const {
    auto it = c_.find(t);
    return it == c_.end() ? S(0) : it->second;
  }

  void set(const IndexTuple& t, const S& v) {
    check(t);
    if (unispace::is_zero(v)) c_.erase(t);
    else c_[t] = v;
  }

  void add(const IndexTuple& t, const S& v) {
    check(t);
    if (unispace::is_zero(v)) return;
    auto [it, inserted] = c_.try_emplace(t, v);
    if (!inserted) {
      it->second += v;
      if (unispace::is_zero(it->second)) c_.erase(it);
    }
  }

  AltForm& operator+=(const AltForm& o) {
    same_shape(o);
    for (const auto& [t, v] : o.c_) add(t, v);
    return *this;
  }
  AltForm& operator-=(const AltForm& o) {
    same_shape(o);
    for (const auto& [t, v] : o.c_) add(t, S(-v));
    return *this;
  }
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(const S& s, const AltForm& a) {
    AltForm r(a.d_, a.k_);
    for (const auto& [t, v] : a.c_) r.set(t, s * v);
    return r;
  }
  bool operator==(const AltForm& o) const { return d_ == o.d_ && k_ == o.k_ && c_ == o.c_; }

  // Coefficients in lexicographic tuple order (dense).
  std::vector<S> dense() const {
    std::vector<S> out;
    for (const auto& t : enumerate_tuples(d_, k_)) out.push_back(coeff(t));
    return out;
  }

 private:
  void check(const IndexTuple& t) const {
    if (static_cast<int>(t.size()) != k_ || !valid_tuple(t, d_))
      throw DimensionError("index tuple " + tuple_key(t) + " does not fit degree " + std::to_string(k_) +
                           " on R^" + std::to_string(d_));
  }
  void same_shape(const AltForm& o) const {
    if (d_ != o.d_ || k_ != o.k_) throw DimensionError("form shape mismatch");
  }

  int d_;
  int k_;
  std::map<IndexTuple, S> c_;
};

template <class S>
AltForm<S> basis_form(int d, const IndexTuple& t) {
  AltForm<S> a(d, static_cast<int>(t.size()));
  a.set(t, S(1));
  return a;
}

template <class S>
AltForm<S> wedge(const AltForm<S>& a, const AltForm<S>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("wedge of forms on different spaces");
  AltForm<S> r(a.ambient_dim(), a.degree() + b.degree());
  if (r.degree() > r.ambient_dim()) return r;
  IndexTuple merged;
  for (const auto& [i, x] : a.coefficients())
    for (const auto& [j, y] : b.coefficients()) {
      int s = shuffle_sign(i, j, &merged);
      if (s == 0) continue;
      S v = x * y;
      r.add(merged, s > 0 ? v : S(-v));
    }
  return r;
}

template <class S>
AltForm<S> interior(const std::vector<S>& v, const AltForm<S>& a) {
  if (static_cast<int>(v.size()) != a.ambient_dim()) throw DimensionError("vector does not match form space");
  if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  AltForm<S> r(a.ambient_dim(), a.degree() - 1);
  IndexTuple rest;
  for (const auto& [t, x] : a.coefficients())
    for (size_t p = 0; p < t.size(); ++p) {
      const S& vi = v[t[p]];
      if (is_zero(vi)) continue;
      rest.assign(t.begin(), t.end());
      rest.erase(rest.begin() + static_cast<long>(p));
      S term = vi * x;
      r.add(rest, p % 2 == 0 ? term : S(-term));
    }
  return r;
}

template <class S>
S subdeterminant(const Matrix<S>& m, const IndexTuple& rows, const IndexTuple& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return S(1);
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2) return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
  Matrix<S> sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = m(rows[r], cols[c]);
  return determinant(sub);
}

// L maps R^d -> R^D (D rows, d columns); a lives on R^D; result lives on R^d.
template <class S>
AltForm<S> pullback_linear(const Matrix<S>& L, const AltForm<S>& a) {
  if (L.rows != a.ambient_dim()) throw DimensionError("pullback: map target does not match form space");
  AltForm<S> r(L.cols, a.degree());
  if (a.degree() > L.cols || a.is_zero()) return r;
  const auto targets = enumerate_tuples(L.cols, a.degree());
  std::vector<S> acc(targets.size(), S(0));
  for (const auto& [i, x] : a.coefficients())
    for (size_t j = 0; j < targets.size(); ++j) {
      S m = subdeterminant(L, i, targets[j]);
      if (!is_zero(m)) acc[j] += x * m;
    }
  for (size_t j = 0; j < targets.size(); ++j) r.set(targets[j], acc[j]);
  return r;
}

// Sum over N blocks of dx^{(j,1)} ^ ... ^ dx^{(j,k)} on R^{kN}.
template <class S>
AltForm<S> standard_beta(int N, int k) {
  if (N < 1 || k < 1) throw std::invalid_argument("standard_beta needs N >= 1 and k >= 1");
  AltForm<S> b(N * k, k);
  IndexTuple t(k);
  for (int j = 0; j < N; ++j) {
    for (int r = 0; r < k; ++r) t[r] = j * k + r;
    b.set(t, S(1));
  }
  return b;
}

template <class S>
std::vector<S> unit_vector(int d, int i) {
  std::vector<S> v(d, S(0));
  v[i] = S(1);
  return v;
}

AltForm<double> to_double(const AltForm<Rational>& a);

}  // namespace unispace
