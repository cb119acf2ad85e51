#pragma once

#include "unispace/multilinear.hpp"
#include "unispace/smoothfn.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace unispace {

class DifferentialForm {
 public:
  DifferentialForm(int chart_dim, int degree);

  int chart_dim() const { return n_; }
  int degree() const { return k_; }
  bool degenerate() const { return degenerate_; }
  bool is_polynomial() const;
  bool is_zero() const { return c_.empty(); }
  const std::map<IndexTuple, SmoothFn>& coefficients() const { return c_; }

  SmoothFn coeff(const IndexTuple& t) const;
  void set(const IndexTuple& t, const SmoothFn& f);
  void add(const IndexTuple& t, const SmoothFn& f);

  DifferentialForm& operator+=(const DifferentialForm& o);
  DifferentialForm& operator-=(const DifferentialForm& o);
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
  friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
  friend DifferentialForm operator*(const SmoothFn& f, const DifferentialForm& a);

  AltForm<double> at(std::span<const double> x) const;
  AltForm<Rational> at_exact(const std::vector<Rational>& x) const;

  // Exact equality for polynomial coefficients.
  bool equals_exactly(const DifferentialForm& o) const;

  static DifferentialForm from_constant(const AltForm<Rational>& a);
  DifferentialForm with_chart_dim(int m) const;

  void mark_degenerate() { degenerate_ = true; }

 private:
  void check(const IndexTuple& t, const SmoothFn& f) const;
  int n_;
  int k_;
  bool degenerate_ = false;
  std::map<IndexTuple, SmoothFn> c_;
};

struct SmoothMap {
  int source_dim = 0;
  std::vector<SmoothFn> components;

  SmoothMap() = default;
  SmoothMap(int n, std::vector<SmoothFn> comps);
  int target_dim() const { return static_cast<int>(components.size()); }
  bool is_polynomial() const;
  std::vector<double> eval(std::span<const double> x) const;
  // D x n Jacobian.
  Matrix<double> jacobian(std::span<const double> x) const;
  static SmoothMap identity(int n);
};

struct VectorField {
  int chart_dim = 0;
  std::vector<SmoothFn> components;

  VectorField() = default;
  VectorField(int n, std::vector<SmoothFn> comps);
  std::vector<double> eval(std::span<const double> x) const;
};

struct NotClosedError : std::invalid_argument {
  NotClosedError(IndexTuple t, std::string expr, double residual);
  IndexTuple tuple;
  std::string expression;
  double residual;
};

DifferentialForm exterior_d(const DifferentialForm& a);
DifferentialForm pullback(const SmoothMap& F, const DifferentialForm& a);
AltForm<double> pullback_at(const SmoothMap& F, const DifferentialForm& a, std::span<const double> x);
DifferentialForm interior_product(const VectorField& V, const DifferentialForm& a);
DifferentialForm lie_derivative(const VectorField& V, const DifferentialForm& a);

// integral_0^1 t^{k-1} (x - c) _| a(c + t (x - c)) dt, no closedness check.
DifferentialForm homotopy_operator(const DifferentialForm& a, const std::vector<Rational>& center);

struct ClosedCheck {
  bool closed = true;
  bool exact_check = true;
  IndexTuple offending;
  std::string offending_expression;
  double max_residual = 0.0;
};

// Symbolic for polynomial coefficients; otherwise d(a) sampled in the box [lo, hi]^n.
ClosedCheck check_closed(const DifferentialForm& a, int samples = 256, double lo = -1.0, double hi = 1.0,
                         double tol = 1e-9);
bool is_closed(const DifferentialForm& a);

DifferentialForm poincare_primitive(const DifferentialForm& a, const std::vector<Rational>& center);
DifferentialForm poincare_primitive(const DifferentialForm& a);

}  // namespace unispace
