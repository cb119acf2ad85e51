#include "unispace/forms.hpp"

#include "unispace/sampling.hpp"

#include <cmath>

namespace unispace {

DifferentialForm::DifferentialForm(int chart_dim, int degree) : n_(chart_dim), k_(degree) {
  if (n_ < 0 || k_ < 0) throw DimensionError("negative chart dimension or degree");
}

bool DifferentialForm::is_polynomial() const {
  for (const auto& [t, f] : c_)
    if (!f.is_polynomial()) return false;
  return true;
}

SmoothFn DifferentialForm::coeff(const IndexTuple& t) const {
  auto it = c_.find(t);
  return it == c_.end() ? SmoothFn::constant(n_, 0) : it->second;
}

void DifferentialForm::check(const IndexTuple& t, const SmoothFn& f) const {
  if (static_cast<int>(t.size()) != k_ || !valid_tuple(t, n_))
    throw DimensionError("index tuple " + tuple_key(t) + " does not fit a " + std::to_string(k_) + "-form on R^" +
                         std::to_string(n_));
  if (f.arity() != n_) throw DimensionError("coefficient arity " + std::to_string(f.arity()) + " != chart dimension");
}

void DifferentialForm::set(const IndexTuple& t, const SmoothFn& f) {
  check(t, f);
  if (f.is_zero()) c_.erase(t);
  else c_.insert_or_assign(t, f);
}

void DifferentialForm::add(const IndexTuple& t, const SmoothFn& f) {
  check(t, f);
  if (f.is_zero()) return;
  auto it = c_.find(t);
  if (it == c_.end()) {
    c_.emplace(t, f);
    return;
  }
  SmoothFn s = it->second + f;
  if (s.is_zero()) c_.erase(it);
  else it->second = s;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
  if (o.n_ != n_ || o.k_ != k_) throw DimensionError("form shape mismatch");
  for (const auto& [t, f] : o.c_) add(t, f);
  return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) {
  if (o.n_ != n_ || o.k_ != k_) throw DimensionError("form shape mismatch");
  for (const auto& [t, f] : o.c_) add(t, -f);
  return *this;
}

DifferentialForm operator*(const SmoothFn& f, const DifferentialForm& a) {
  DifferentialForm r(a.n_, a.k_);
  for (const auto& [t, g] : a.c_) r.set(t, f * g);
  return r;
}

AltForm<double> DifferentialForm::at(std::span<const double> x) const {
  AltForm<double> r(n_, k_);
  for (const auto& [t, f] : c_) r.set(t, f.eval(x));
  return r;
}

AltForm<Rational> DifferentialForm::at_exact(const std::vector<Rational>& x) const {
  AltForm<Rational> r(n_, k_);
  for (const auto& [t, f] : c_) r.set(t, f.eval_exact(x));
  return r;
}

bool DifferentialForm::equals_exactly(const DifferentialForm& o) const {
  if (n_ != o.n_ || k_ != o.k_) return false;
  DifferentialForm diff = *this - o;
  if (!diff.is_polynomial()) throw ExprError("exact comparison needs polynomial coefficients");
  return diff.is_zero();
}

DifferentialForm DifferentialForm::from_constant(const AltForm<Rational>& a) {
  DifferentialForm r(a.ambient_dim(), a.degree());
  for (const auto& [t, v] : a.coefficients()) r.set(t, SmoothFn::constant(a.ambient_dim(), v));
  return r;
}

DifferentialForm DifferentialForm::with_chart_dim(int m) const {
  DifferentialForm r(m, k_);
  for (const auto& [t, f] : c_) r.set(t, f.with_arity(m));
  return r;
}

SmoothMap::SmoothMap(int n, std::vector<SmoothFn> comps) : source_dim(n), components(std::move(comps)) {
  for (const auto& f : components)
    if (f.arity() != n) throw DimensionError("map component arity != source dimension");
}

bool SmoothMap::is_polynomial() const {
  for (const auto& f : components)
    if (!f.is_polynomial()) return false;
  return true;
}

std::vector<double> SmoothMap::eval(std::span<const double> x) const {
  std::vector<double> y;
  y.reserve(components.size());
  for (const auto& f : components) y.push_back(f.eval(x));
  return y;
}

Matrix<double> SmoothMap::jacobian(std::span<const double> x) const {
  Matrix<double> J(target_dim(), source_dim);
  std::vector<double> g(source_dim);
  for (int r = 0; r < target_dim(); ++r) {
    components[r].eval_grad(x, g);
    for (int c = 0; c < source_dim; ++c) J(r, c) = g[c];
  }
  return J;
}

SmoothMap SmoothMap::identity(int n) {
  std::vector<SmoothFn> c;
  for (int i = 0; i < n; ++i) c.push_back(SmoothFn::coordinate(n, i));
  return SmoothMap(n, c);
}

VectorField::VectorField(int n, std::vector<SmoothFn> comps) : chart_dim(n), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != n) throw DimensionError("vector field needs one component per coordinate");
  for (const auto& f : components)
    if (f.arity() != n) throw DimensionError("vector field component arity != chart dimension");
}

std::vector<double> VectorField::eval(std::span<const double> x) const {
  std::vector<double> v;
  for (const auto& f : components) v.push_back(f.eval(x));
  return v;
}

NotClosedError::NotClosedError(IndexTuple t, std::string expr, double res)
    : std::invalid_argument("form is not closed: d-coefficient on (" + tuple_key(t) + ") is " + expr),
      tuple(std::move(t)),
      expression(std::move(expr)),
      residual(res) {}

DifferentialForm exterior_d(const DifferentialForm& a) {
  const int n = a.chart_dim(), k = a.degree();
  DifferentialForm r(n, k + 1);
  if (k >= n) {
    r.mark_degenerate();
    return r;
  }
  IndexTuple merged;
  for (const auto& [I, f] : a.coefficients())
    for (int i = 0; i < n; ++i) {
      int s = shuffle_sign(IndexTuple{i}, I, &merged);
      if (s == 0) continue;
      SmoothFn df = f.partial(i);
      if (df.is_zero()) continue;
      r.add(merged, s > 0 ? df : -df);
    }
  return r;
}

namespace {

SmoothFn symbolic_det(const std::vector<std::vector<SmoothFn>>& m) {
  const size_t k = m.size();
  if (k == 1) return m[0][0];
  if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  SmoothFn s = SmoothFn::constant(m[0][0].arity(), 0);
  for (size_t c = 0; c < k; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<SmoothFn>> sub;
    for (size_t r = 1; r < k; ++r) {
      std::vector<SmoothFn> row;
      for (size_t j = 0; j < k; ++j)
        if (j != c) row.push_back(m[r][j]);
      sub.push_back(std::move(row));
    }
    SmoothFn t = m[0][c] * symbolic_det(sub);
    s = c % 2 == 0 ? s + t : s - t;
  }
  return s;
}

}  // namespace

DifferentialForm pullback(const SmoothMap& F, const DifferentialForm& a) {
  if (F.target_dim() != a.chart_dim()) throw DimensionError("pullback: map target does not match form chart");
  const int n = F.source_dim, k = a.degree();
  DifferentialForm r(n, k);
  if (k > n) return r;
  std::vector<std::vector<SmoothFn>> dF(F.target_dim());
  std::vector<bool> have(F.target_dim(), false);
  auto row = [&](int i) -> const std::vector<SmoothFn>& {
    if (!have[i]) {
      for (int j = 0; j < n; ++j) dF[i].push_back(F.components[i].partial(j));
      have[i] = true;
    }
    return dF[i];
  };
  const auto targets = enumerate_tuples(n, k);
  for (const auto& [I, f] : a.coefficients()) {
    SmoothFn fF = SmoothFn::compose(f, F.components);
    if (k == 0) {
      r.add(I, fF);
      continue;
    }
    for (const auto& J : targets) {
      std::vector<std::vector<SmoothFn>> m(k, std::vector<SmoothFn>(k));
      bool zero_row = false;
      for (int p = 0; p < k && !zero_row; ++p) {
        const auto& dr = row(I[p]);
        bool all_zero = true;
        for (int q = 0; q < k; ++q) {
          m[p][q] = dr[J[q]];
          all_zero = all_zero && m[p][q].is_zero();
        }
        zero_row = all_zero;
      }
      if (zero_row) continue;
      SmoothFn det = symbolic_det(m);
      if (det.is_zero()) continue;
      r.add(J, fF * det);
    }
  }
  return r;
}

AltForm<double> pullback_at(const SmoothMap& F, const DifferentialForm& a, std::span<const double> x) {
  if (F.target_dim() != a.chart_dim()) throw DimensionError("pullback: map target does not match form chart");
  auto y = F.eval(x);
  return pullback_linear(F.jacobian(x), a.at(y));
}

DifferentialForm interior_product(const VectorField& V, const DifferentialForm& a) {
  if (V.chart_dim != a.chart_dim()) throw DimensionError("vector field and form live on different charts");
  if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
  DifferentialForm r(a.chart_dim(), a.degree() - 1);
  for (const auto& [I, f] : a.coefficients())
    for (size_t p = 0; p < I.size(); ++p) {
      const SmoothFn& v = V.components[I[p]];
      if (v.is_zero()) continue;
      IndexTuple rest = I;
      rest.erase(rest.begin() + static_cast<long>(p));
      SmoothFn t = v * f;
      r.add(rest, p % 2 == 0 ? t : -t);
    }
  return r;
}

DifferentialForm lie_derivative(const VectorField& V, const DifferentialForm& a) {
  DifferentialForm da = exterior_d(a);
  DifferentialForm first(a.chart_dim(), a.degree());
  if (!da.degenerate() && da.degree() >= 1) first = interior_product(V, da);
  if (a.degree() == 0) return first;
  return first + exterior_d(interior_product(V, a));
}

DifferentialForm homotopy_operator(const DifferentialForm& a, const std::vector<Rational>& center) {
  const int n = a.chart_dim(), k = a.degree();
  if (static_cast<int>(center.size()) != n) throw DimensionError("homotopy center dimension != chart dimension");
  if (k == 0) return DifferentialForm(n, 0);
  DifferentialForm r(n, k - 1);
  for (const auto& [I, f] : a.coefficients()) {
    SmoothFn integral = SmoothFn::cone(f, k, center);
    for (size_t p = 0; p < I.size(); ++p) {
      SmoothFn u = SmoothFn::coordinate(n, I[p]) - SmoothFn::constant(n, center[I[p]]);
      IndexTuple rest = I;
      rest.erase(rest.begin() + static_cast<long>(p));
      SmoothFn t = u * integral;
      r.add(rest, p % 2 == 0 ? t : -t);
    }
  }
  return r;
}

ClosedCheck check_closed(const DifferentialForm& a, int samples, double lo, double hi, double tol) {
  ClosedCheck out;
  DifferentialForm da = exterior_d(a);
  if (da.degenerate()) return out;
  if (da.is_polynomial()) {
    if (!da.is_zero()) {
      out.closed = false;
      out.offending = da.coefficients().begin()->first;
      out.offending_expression = da.coefficients().begin()->second.to_string();
    }
    return out;
  }
  out.exact_check = false;
  for (const auto& x : sobol_box(a.chart_dim(), samples, lo, hi)) {
    for (const auto& [t, f] : da.coefficients()) {
      double v = std::abs(f.eval(x));
      if (v > out.max_residual) {
        out.max_residual = v;
        if (v > tol) {
          out.closed = false;
          out.offending = t;
          out.offending_expression = f.to_string();
        }
      }
    }
  }
  return out;
}

bool is_closed(const DifferentialForm& a) { return check_closed(a).closed; }

DifferentialForm poincare_primitive(const DifferentialForm& a, const std::vector<Rational>& center) {
  auto c = check_closed(a);
  if (!c.closed) throw NotClosedError(c.offending, c.offending_expression, c.max_residual);
  return homotopy_operator(a, center);
}

DifferentialForm poincare_primitive(const DifferentialForm& a) {
  return poincare_primitive(a, std::vector<Rational>(a.chart_dim(), Rational(0)));
}

}  // namespace unispace
