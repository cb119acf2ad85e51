#include "unispace/regularity.hpp"

namespace unispace {

Subspace::Subspace(Matrix<Rational> b) : basis(std::move(b)) {
  if (exact_rank(basis) != basis.cols) throw std::invalid_argument("subspace basis is not linearly independent");
}

Subspace Subspace::coordinate(int D, const std::vector<int>& axes) {
  Matrix<Rational> b(D, static_cast<int>(axes.size()));
  for (size_t j = 0; j < axes.size(); ++j) b(axes[j], static_cast<int>(j)) = 1;
  return Subspace(b);
}

RegularityCertificate is_regular(const AltForm<Rational>& beta, const Subspace& T) {
  RegularityCertificate c;
  c.form = beta;
  c.subspace = T;
  c.contraction = contraction_matrix(beta, T.basis);
  c.achieved_rank = exact_rank(c.contraction);
  c.required_rank = binomial(T.dim(), beta.degree() - 1);
  c.regular = Integer(c.achieved_rank) == c.required_rank;
  return c;
}

NumericRegularity is_regular_numeric(const AltForm<double>& beta, const Matrix<double>& T, double rel_threshold) {
  NumericRegularity r;
  auto M = contraction_matrix(beta, T);
  auto nr = numeric_rank(M, rel_threshold);
  r.rank = nr.rank;
  r.required_rank = static_cast<int>(binomial(T.cols, beta.degree() - 1).get_si());
  r.regular = r.rank == r.required_rank;
  r.condition = nr.condition;
  r.sigma_min = nr.sigma_min_retained;
  r.sigma_max = nr.sigma_max;
  return r;
}

namespace {

void require_lk(int l, int k) {
  if (k < 3) throw DomainError("delta needs k >= 3");
  if (l < k) throw DomainError("delta needs l >= k");
}

}  // namespace

Integer delta_sum(int l, int k) {
  require_lk(l, k);
  Integer s = 1 + (l - k);
  for (int i = k; i <= l - 1; ++i) s += i / (k - 1);
  return s;
}

Integer delta_recursion(int l, int k) {
  require_lk(l, k);
  Integer d = 1;
  for (int i = k; i < l; ++i) d += i / (k - 1) + 1;
  return d;
}

Integer delta(int l, int k) {
  Integer a = delta_sum(l, k);
  if (a != delta_recursion(l, k))
    throw std::logic_error("delta sum formula and recursion disagree at l=" + std::to_string(l) +
                           ", k=" + std::to_string(k));
  return a;
}

Rational delta_closed_form(int l, int k) {
  require_lk(l, k);
  const int q = (l - 2) / (k - 1);
  const int p = (l - 1) / (k - 1);
  const int mod = (l - 1) - (k - 1) * p;
  Rational r = Rational(l - 1) + Rational(k - 1) / 2 * (2 + q) * (q - 1) + Rational(p) * (1 + mod);
  r.canonicalize();
  return r;
}

Integer s_dim(int m, int k) {
  if (k < 3 || m < k) throw DomainError("s(m,k) needs m >= k >= 3");
  return Integer(2) * ((m - k) / 2 + 3) * k + 1;
}

Integer d_dim(int m, int k) {
  if (k < 3 || m < k) throw DomainError("d(m,k) needs m >= k >= 3");
  const long q = (2L * m) / (k - 1);
  Integer half = Integer(k - 1) * q * (q - 1);
  half /= 2;
  return s_dim(m, k) + 2 * m + 2 - k + half + Integer(k) * (m + 1) * binomial(m + 1, k);
}

Integer n1(int n, int k) {
  if (k < 1 || n < k - 1) throw DomainError("N1(n,k) needs n >= k - 1");
  return binomial(n, k - 1);
}

Integer n1_bar(int n, int k) { return n1(n, k) * k * (n + 1); }

bool Staircase::ok() const { return certificate.regular && first_failure() == nullptr; }

const StageRecord* Staircase::first_failure() const {
  for (const auto& s : stages)
    if (!s.spanning_holds || !s.regular) return &s;
  return nullptr;
}

Staircase staircase_embedding(int l, int k, bool certify_stages) {
  require_lk(l, k);
  Staircase st;
  st.l = l;
  st.k = k;
  const int D = static_cast<int>(delta(l, k).get_si()) * k;
  st.delta = D / k;
  // Full-size matrix; stage i uses the first i columns and the first k*delta(i) rows.
  Matrix<Rational> f(D, l);
  for (int r = 0; r < k; ++r) f(r, r) = 1;
  int blocks = 1;
  for (int i = k; i < l; ++i) {
    const int fresh = i / (k - 1) + 1;
    for (int g = 0; g < fresh; ++g) {
      const int base = (blocks + g) * k;
      f(base, i) = 1;
      for (int r = 1; r <= k - 1; ++r) {
        const int idx = g * (k - 1) + r;  // 1-based basis vector
        if (idx > i) break;
        f(base + r, idx - 1) = 1;
      }
    }
    const int before = blocks;
    blocks += fresh;

    StageRecord rec;
    rec.from_dim = i;
    rec.new_blocks = fresh;
    rec.delta_after = blocks;
    if (certify_stages) {
      const int rows = blocks * k;
      Matrix<Rational> fi(rows, i + 1);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c <= i; ++c) fi(r, c) = f(r, c);
      const AltForm<Rational> beta = standard_beta<Rational>(blocks, k);
      const auto cols = enumerate_tuples(i + 1, k - 1);
      std::vector<std::vector<Rational>> span_rows;
      for (int a = before * k; a < rows; ++a) {
        AltForm<Rational> c = pullback_linear(fi, interior(unit_vector<Rational>(rows, a), beta));
        std::vector<Rational> row;
        for (const auto& t : cols) row.push_back(c.coeff(t));
        span_rows.push_back(std::move(row));
      }
      const int base_rows = static_cast<int>(span_rows.size());
      for (const auto& S : enumerate_tuples(i, k - 2)) {
        IndexTuple T = S;
        T.push_back(i);
        std::vector<Rational> row(cols.size(), Rational(0));
        for (size_t j = 0; j < cols.size(); ++j)
          if (cols[j] == T) row[j] = 1;
        span_rows.push_back(std::move(row));
      }
      auto to_matrix = [&](int count) {
        Matrix<Rational> M(count, static_cast<int>(cols.size()));
        for (int r = 0; r < count; ++r)
          for (size_t c = 0; c < cols.size(); ++c) M(r, static_cast<int>(c)) = span_rows[r][c];
        return M;
      };
      rec.span_rank = exact_rank(to_matrix(base_rows));
      rec.span_with_target = exact_rank(to_matrix(static_cast<int>(span_rows.size())));
      rec.spanning_holds = rec.span_rank == rec.span_with_target;
      auto cert = is_regular(beta, Subspace(fi));
      rec.achieved_rank = cert.achieved_rank;
      rec.required_rank = cert.required_rank;
      rec.regular = cert.regular;
    } else {
      rec.spanning_holds = true;
      rec.regular = true;
    }
    st.stages.push_back(std::move(rec));
  }
  st.map = f;
  st.certificate = is_regular(standard_beta<Rational>(st.delta, k), Subspace(f));
  return st;
}

Staircase build_regular_subspace(int l, int k) {
  Staircase st = staircase_embedding(l, k, true);
  if (const StageRecord* bad = st.first_failure()) {
    std::string msg = "stage " + std::to_string(bad->from_dim) + " -> " + std::to_string(bad->from_dim + 1) +
                      " failed: ";
    if (!bad->spanning_holds)
      msg += "new blocks span rank " + std::to_string(bad->span_rank) + ", with target forms " +
             std::to_string(bad->span_with_target);
    else
      msg += "image rank " + std::to_string(bad->achieved_rank) + " of " + to_string(bad->required_rank);
    throw ConstructionError(msg, std::move(st));
  }
  if (!st.certificate.regular)
    throw ConstructionError("final certificate failed: rank " + std::to_string(st.certificate.achieved_rank) +
                                " of " + to_string(st.certificate.required_rank),
                            std::move(st));
  return st;
}

FormalMonomorphism formal_monomorphism(const AltForm<Rational>& g, int l_reg) {
  FormalMonomorphism fm;
  const int dim = g.ambient_dim();
  const int m = dim - 1;
  const int k = g.degree();
  if (k < 3 || dim < k) throw DomainError("formal monomorphism needs k >= 3 and a tangent space of dimension >= k");
  if (l_reg < 0) l_reg = 2 * m + 1;
  if (l_reg < dim) throw DomainError("l_reg must be at least the tangent dimension");
  fm.g = g;
  fm.m = m;
  fm.k = k;
  fm.l_reg = l_reg;

  Staircase st = staircase_embedding(l_reg, k, false);
  fm.regular_blocks = st.delta;
  fm.s1 = select_columns(st.map, 0, dim);
  AltForm<Rational> beta1 = standard_beta<Rational>(st.delta, k);
  fm.g1 = g - pullback_linear(fm.s1, beta1);

  fm.block_tuples = enumerate_tuples(dim, k);
  const int nb = static_cast<int>(fm.block_tuples.size());
  fm.s2 = Matrix<Rational>(nb * k, dim);
  for (int b = 0; b < nb; ++b) {
    const IndexTuple& R = fm.block_tuples[b];
    fm.s2(b * k, R[0]) = fm.g1.coeff(R);
    for (int p = 1; p < k; ++p) fm.s2(b * k + p, R[p]) = 1;
  }
  fm.s = stack_rows(fm.s1, fm.s2);
  fm.beta_target = standard_beta<Rational>(st.delta + nb, k);
  fm.pulled_back = pullback_linear(fm.s, fm.beta_target);
  fm.identity_holds = fm.pulled_back == g;
  fm.rank = exact_rank(fm.s);
  fm.injective = fm.rank == dim;
  if (fm.injective) fm.certificate = is_regular(fm.beta_target, Subspace(fm.s));
  return fm;
}

}  // namespace unispace
