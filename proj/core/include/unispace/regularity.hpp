#pragma once

#include "unispace/linalg.hpp"
#include "unispace/multilinear.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace unispace {

// Column span of a D x l matrix.
struct Subspace {
  Matrix<Rational> basis;

  Subspace() = default;
  explicit Subspace(Matrix<Rational> b);
  int ambient_dim() const { return basis.rows; }
  int dim() const { return basis.cols; }
  static Subspace coordinate(int D, const std::vector<int>& axes);
};

struct RegularityCertificate {
  AltForm<Rational> form{0, 0};
  Subspace subspace;
  Matrix<Rational> contraction;  // rows: ambient basis vectors; columns: lex basis of Lambda^{k-1}(T)*
  int achieved_rank = 0;
  Integer required_rank = 0;
  bool regular = false;
};

// Row a holds the coordinates of (e_a _| beta) restricted to T.
template <class S>
Matrix<S> contraction_matrix(const AltForm<S>& beta, const Matrix<S>& T) {
  if (beta.ambient_dim() != T.rows) throw DimensionError("subspace and form live in different spaces");
  const int k = beta.degree();
  if (k < 1) throw std::invalid_argument("contraction needs a form of degree >= 1");
  if (T.cols < k - 1) throw DimensionError("subspace dimension below k - 1");
  const auto cols = enumerate_tuples(T.cols, k - 1);
  Matrix<S> M(T.rows, static_cast<int>(cols.size()));
  for (int a = 0; a < T.rows; ++a) {
    AltForm<S> c = pullback_linear(T, interior(unit_vector<S>(T.rows, a), beta));
    for (size_t j = 0; j < cols.size(); ++j) M(a, static_cast<int>(j)) = c.coeff(cols[j]);
  }
  return M;
}

RegularityCertificate is_regular(const AltForm<Rational>& beta, const Subspace& T);

struct NumericRegularity {
  int rank = 0;
  int required_rank = 0;
  bool regular = false;
  double condition = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

NumericRegularity is_regular_numeric(const AltForm<double>& beta, const Matrix<double>& T, double rel_threshold = 1e-8);

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Integer delta(int l, int k);            // sum formula, cross-checked against the recursion
Integer delta_sum(int l, int k);
Integer delta_recursion(int l, int k);
Rational delta_closed_form(int l, int k);  // printed closed form, reported only
Integer s_dim(int m, int k);
Integer d_dim(int m, int k);
Integer n1(int n, int k);
Integer n1_bar(int n, int k);

struct StageRecord {
  int from_dim = 0;  // i: the stage extends f^i to f^{i+1}
  int new_blocks = 0;
  int delta_after = 0;
  int span_rank = 0;            // rank of the new-block contractions
  int span_with_target = 0;     // rank after adding every e*_S ^ e*_{i+1}
  bool spanning_holds = false;  // the new blocks span Lambda^{k-2}(V^i)* ^ e*_{i+1}
  int achieved_rank = 0;
  Integer required_rank = 0;
  bool regular = false;
};

struct Staircase {
  int l = 0;
  int k = 0;
  int delta = 0;
  Matrix<Rational> map;  // k*delta x l
  std::vector<StageRecord> stages;
  RegularityCertificate certificate;
  bool ok() const;
  const StageRecord* first_failure() const;
};

// Inductive block construction; never throws on a failed stage.
Staircase staircase_embedding(int l, int k, bool certify_stages = true);

struct ConstructionError : std::runtime_error {
  ConstructionError(const std::string& what, Staircase s) : std::runtime_error(what), staircase(std::move(s)) {}
  Staircase staircase;
};

// Throws ConstructionError naming the first failing stage.
Staircase build_regular_subspace(int l, int k);

struct FormalMonomorphism {
  AltForm<Rational> g{0, 0};
  int m = 0;
  int k = 0;
  int l_reg = 0;
  int regular_blocks = 0;  // delta(l_reg, k)
  std::vector<IndexTuple> block_tuples;  // one correction block per k-tuple of [m+1]
  Matrix<Rational> s1;
  Matrix<Rational> s2;
  Matrix<Rational> s;
  AltForm<Rational> g1{0, 0};
  AltForm<Rational> beta_target{0, 0};
  AltForm<Rational> pulled_back{0, 0};
  bool identity_holds = false;
  int rank = 0;
  bool injective = false;
  RegularityCertificate certificate;
};

FormalMonomorphism formal_monomorphism(const AltForm<Rational>& g, int l_reg = -1);

}  // namespace unispace
