#include "unispace/immersion.hpp"

#include "unispace/linalg.hpp"
#include "unispace/sampling.hpp"

#include <cmath>

namespace unispace {

DifferentialForm gamma_form(int N, int k) {
  if (N < 1 || k < 1) throw std::invalid_argument("gamma_form needs N >= 1 and k >= 1");
  const int D = N * k;
  DifferentialForm g(D, k - 1);
  for (int j = 0; j < N; ++j) {
    IndexTuple t;
    for (int r = 1; r < k; ++r) t.push_back(j * k + r);
    g.set(t, SmoothFn::coordinate(D, j * k));
  }
  return g;
}

LocalImmersion local_immersion(const DifferentialForm& phi) {
  LocalImmersion f;
  f.n = phi.chart_dim();
  f.k = phi.degree() + 1;
  if (f.n < f.k - 1) throw DimensionError("local immersion needs chart dimension >= k - 1");
  f.blocks = enumerate_tuples(f.n, f.k - 1);
  std::vector<SmoothFn> comps;
  for (const auto& T : f.blocks) {
    comps.push_back(phi.coeff(T));
    for (int t : T) comps.push_back(SmoothFn::coordinate(f.n, t));
  }
  f.map = SmoothMap(f.n, comps);
  return f;
}

LocalImmersion shrink(const LocalImmersion& f, int m) {
  if (m < 1) throw std::invalid_argument("shrink factor m must be >= 1");
  LocalImmersion g = f;
  if (m == 1) return g;
  for (size_t b = 0; b < f.blocks.size(); ++b) {
    auto& c = g.map.components;
    c[b * f.k] = Rational(1, m) * c[b * f.k];
    if (f.k > 1) c[b * f.k + 1] = Rational(m) * c[b * f.k + 1];
  }
  return g;
}

AltForm<Rational> shrink_block_pullback(int m, int k) {
  if (m < 1) throw std::invalid_argument("shrink factor m must be >= 1");
  Matrix<Rational> L = Matrix<Rational>::identity(k);
  L(0, 0) = Rational(1, m);
  if (k > 1) L(1, 1) = m;
  IndexTuple all(k);
  for (int i = 0; i < k; ++i) all[i] = i;
  return pullback_linear(L, basis_form<Rational>(k, all));
}

AltForm<double> AssembledImmersion::beta() const { return standard_beta<double>(N1 * (n + 1), k); }

void AssembledImmersion::eval(std::span<const double> x, std::vector<double>& f, Matrix<double>* J) const {
  const int d = ambient();
  const int D = target_dim();
  f.assign(D, 0.0);
  if (J) *J = Matrix<double>(D, d);
  std::vector<const Ball*> owner(n + 1, nullptr);
  for (const Ball* b : cover.candidates(x))
    if (!owner[b->family] && cover.distance(x, *b) < b->dradius) owner[b->family] = b;
  std::vector<double> gchi(d), gy(n), gx(d), s(k), ds(static_cast<size_t>(k) * d);
  for (int i = 0; i <= n; ++i) {
    const Ball* B = owner[i];
    if (!B) continue;
    const Piece& P = pieces[i][B->index];
    const double chi = B->chi.eval_grad(x, gchi);
    const auto y = P.chart.to_local(x);
    const Matrix<double> E = P.chart.dbasis();
    for (size_t b = 0; b < blocks.size(); ++b) {
      const IndexTuple& T = blocks[b];
      std::fill(ds.begin(), ds.end(), 0.0);
      s[0] = P.lambda[b].eval_grad(y, gy);
      for (int a = 0; a < d; ++a) {
        double v = 0;
        for (int j = 0; j < n; ++j) v += E(a, j) * gy[j];
        ds[a] = v;
      }
      for (int r = 1; r < k; ++r) {
        s[r] = y[T[r - 1]] - P.translation[b][r];
        for (int a = 0; a < d; ++a) ds[static_cast<size_t>(r) * d + a] = E(a, T[r - 1]);
      }
      const int base = (i * N1 + static_cast<int>(b)) * k;
      for (int r = 0; r < k; ++r) {
        double sc = 1.0;
        if (scale != 1) sc = r == 0 ? 1.0 / scale : (r == 1 ? static_cast<double>(scale) : 1.0);
        f[base + r] = sc * chi * s[r];
        if (J)
          for (int a = 0; a < d; ++a) (*J)(base + r, a) = sc * (s[r] * gchi[a] + chi * ds[static_cast<size_t>(r) * d + a]);
      }
    }
  }
}

std::vector<double> AssembledImmersion::eval(std::span<const double> x) const {
  std::vector<double> f;
  eval(x, f, nullptr);
  return f;
}

AssembledImmersion assemble(const NashCovering& cover, const DifferentialForm& phi, const AssembleOptions& opt) {
  AssembledImmersion A;
  const auto& K = cover.complex;
  const int d = K.ambient;
  if (phi.chart_dim() != d) throw DimensionError("primitive must be given in the complex's ambient coordinates");
  A.n = K.dim;
  A.k = phi.degree() + 1;
  if (A.k < 2) throw DimensionError("primitive must have degree >= 1");
  if (A.n < A.k - 1) throw DimensionError("manifold dimension below k - 1");
  A.N1 = static_cast<int>(n1(A.n, A.k).get_si());
  A.cover = cover;
  A.phi = phi;
  A.blocks = enumerate_tuples(A.n, A.k - 1);

  auto pc = check_partition(cover, opt.check_samples, opt.seed);
  if (!pc.first_uncovered.empty() || pc.min_seed_sum <= 0.0) {
    std::string where;
    for (double v : pc.first_uncovered) where += (where.empty() ? "" : ",") + std::to_string(v);
    throw GapError("coverage gap: all rho_i vanish at (" + where + ")", pc.first_uncovered);
  }
  if (pc.max_chi_rho_defect > 1e-12 || !pc.rho_support_in_balls)
    throw PreconditionError("cutoff does not dominate the partition of unity at a sample point");

  for (const auto& fam : A.cover.families) {
    std::vector<Piece> row;
    for (const auto& B : fam) {
      Piece P;
      P.family = B.family;
      P.ball = B.index;
      P.chart = A.cover.local_coordinates(B);
      P.rho = A.cover.rho_local(B);
      std::vector<SmoothFn> inner;
      for (int a = 0; a < d; ++a) {
        Polynomial p = Polynomial::constant(A.n, P.chart.center[a]);
        for (int j = 0; j < A.n; ++j) p += P.chart.basis(a, j) * Polynomial::coordinate(A.n, j);
        inner.push_back(SmoothFn::polynomial(p));
      }
      for (const auto& T : A.blocks) {
        SmoothFn outer = SmoothFn::constant(d, 0);
        for (const auto& [I, coef] : phi.coefficients()) {
          Rational w = subdeterminant(P.chart.basis, I, T);
          if (sgn(w) == 0) continue;
          outer = outer + w * (P.rho * coef);
        }
        P.lambda.push_back(outer.is_zero() ? SmoothFn::constant(A.n, 0) : SmoothFn::compose(outer, inner));
        P.translation.push_back(std::vector<double>(A.k, 0.0));
      }
      row.push_back(std::move(P));
    }
    A.pieces.push_back(std::move(row));
  }
  return A;
}

namespace {

void compute_translations(AssembledImmersion& A, int box_samples) {
  const int k = A.k;
  struct Box {
    std::vector<double> lo, hi;
  };
  std::vector<std::vector<std::vector<Box>>> boxes(A.pieces.size());
  for (size_t i = 0; i < A.pieces.size(); ++i) {
    boxes[i].resize(A.pieces[i].size());
    for (auto& pb : boxes[i]) pb.assign(A.blocks.size(), Box{std::vector<double>(k, 1e300), std::vector<double>(k, -1e300)});
  }
  for (const auto& sp : sample_complex(A.cover.complex, box_samples, 7919)) {
    for (int i = 0; i <= A.n; ++i) {
      const Ball* B = A.cover.containing(i, sp.x);
      if (!B) continue;
      const auto y = A.pieces[i][B->index].chart.to_local(sp.x);
      for (size_t b = 0; b < A.blocks.size(); ++b)
        for (int r = 1; r < k; ++r) {
          double v = y[A.blocks[b][r - 1]];
          auto& bx = boxes[i][B->index][b];
          bx.lo[r] = std::min(bx.lo[r], v);
          bx.hi[r] = std::max(bx.hi[r], v);
        }
    }
  }
  for (size_t i = 0; i < A.pieces.size(); ++i)
    for (size_t j = 0; j < A.pieces[i].size(); ++j)
      for (size_t b = 0; b < A.blocks.size(); ++b)
        for (int r = 1; r < k; ++r) {
          const auto& bx = boxes[i][j][b];
          A.pieces[i][j].translation[b][r] = bx.lo[r] <= bx.hi[r] ? 0.5 * (bx.lo[r] + bx.hi[r]) : 0.0;
        }
}

double max_piece_radius(const AssembledImmersion& A) {
  double r = 0;
  for (const auto& fam : A.cover.families)
    for (const auto& b : fam) r = std::max(r, b.dradius);
  return r;
}

}  // namespace

AssembledImmersion shrink(const AssembledImmersion& A0, int m, double R, int max_refinements, int box_samples) {
  if (m < 1) throw std::invalid_argument("shrink factor m must be >= 1");
  AssembledImmersion A = A0;
  ShrinkInfo info;
  info.m = m;
  info.requested_bound = R;
  info.target_piece_radius = 1.0 / (static_cast<double>(m) * m);
  if (m == 1) {
    A.scale = 1;
    for (auto& fam : A.pieces)
      for (auto& P : fam)
        for (auto& t : P.translation) std::fill(t.begin(), t.end(), 0.0);
    info.achieved_piece_radius = max_piece_radius(A);
    A.shrink_info = info;
    return A;
  }
  while (max_piece_radius(A) > info.target_piece_radius && info.refinements < max_refinements) {
    SimplicialComplex K = barycentric_subdivide(A.cover.complex);
    CoverOptions opt = A.cover.options;
    opt.max_subdivisions = 0;
    opt.stop_at_first_gap = true;
    NashCovering refined = nash_cover(K, opt);
    if (!refined.coverage.covered) {
      info.notes.push_back("refinement abandoned: the barycentric subdivision (" + std::to_string(K.simplices.size()) +
                           " simplices) is not covered by its barycentre balls, first gap in simplex " +
                           std::to_string(refined.coverage.first_gap_simplex));
      break;
    }
    A = assemble(refined, A.phi);
    ++info.refinements;
  }
  info.achieved_piece_radius = max_piece_radius(A);
  if (info.achieved_piece_radius > info.target_piece_radius)
    info.notes.push_back("pieces have radius " + std::to_string(info.achieved_piece_radius) + " > 1/m^2 = " +
                         std::to_string(info.target_piece_radius));
  compute_translations(A, box_samples);
  A.scale = m;
  A.shrink_info = info;
  return A;
}

VerificationReport verify(const AssembledImmersion& A, const DifferentialForm& omega, int samples, double tol,
                          std::uint64_t seed) {
  VerificationReport rep;
  const int d = A.ambient(), n = A.n, k = A.k;
  if (omega.chart_dim() != d || omega.degree() != k)
    throw DimensionError("target form must be a " + std::to_string(k) + "-form on R^" + std::to_string(d));
  rep.seed = seed;
  rep.tol = tol;
  rep.required_rank = n;
  rep.min_rank = n;
  rep.min_family_rank = n;
  rep.min_sigma = 1e300;
  rep.min_seed_sum = 1e300;
  rep.families.assign(n + 1, {});
  const AltForm<double> beta = A.beta();
  const int rows_per_family = A.N1 * k;
  std::vector<double> f;
  Matrix<double> J;
  const bool flat = d == n;
  for (const auto& sp : sample_complex(A.cover.complex, samples, seed)) {
    ++rep.samples;
    A.eval(sp.x, f, &J);
    Matrix<double> B = flat ? Matrix<double>::identity(n) : A.cover.complex.tangent_basis(A.cover.complex.simplices[sp.simplex]);
    Matrix<double> M = J * B;
    AltForm<double> lhs = pullback_linear(M, beta);
    AltForm<double> rhs = pullback_linear(B, omega.at(sp.x));
    double res = 0;
    const AltForm<double> diff = lhs - rhs;
    for (const auto& [t, v] : diff.coefficients()) res = std::max(res, std::abs(v));
    if (res > rep.max_residual || rep.worst_point.empty()) {
      if (res >= rep.max_residual) {
        rep.max_residual = res;
        rep.worst_point = sp.x;
      }
    }
    if (!(res < tol)) ++rep.residual_failures;

    auto nr = numeric_rank(M, rep.rank_threshold);
    rep.min_rank = std::min(rep.min_rank, nr.rank);
    if (nr.rank < n) ++rep.rank_failures;
    else rep.min_sigma = std::min(rep.min_sigma, nr.sigma_min_retained);

    double r2 = 0;
    for (double v : f) r2 += v * v;
    rep.image_radius = std::max(rep.image_radius, std::sqrt(r2));

    double seed_sum = A.cover.seed_sum(sp.x);
    rep.min_seed_sum = std::min(rep.min_seed_sum, seed_sum);
    auto rho = A.cover.rho_values(sp.x);
    auto chi = A.cover.chi_values(sp.x);
    double total = 0;
    int certifier = -1;
    for (int i = 0; i <= n; ++i) {
      total += rho[i];
      rep.max_chi_rho_defect = std::max(rep.max_chi_rho_defect, std::abs(chi[i] * rho[i] - rho[i]));
      auto& fd = rep.families[i];
      if (rho[i] > 0) {
        ++fd.samples_rho_positive;
        fd.max_residual_rho_positive = std::max(fd.max_residual_rho_positive, res);
        if (certifier < 0) certifier = i;
      } else {
        fd.max_residual_rho_zero = std::max(fd.max_residual_rho_zero, res);
      }
    }
    rep.max_partition_error = std::max(rep.max_partition_error, std::abs(total - 1.0));
    if (certifier >= 0) {
      Matrix<double> rows(rows_per_family, n);
      for (int r = 0; r < rows_per_family; ++r)
        for (int c = 0; c < n; ++c) rows(r, c) = M(certifier * rows_per_family + r, c);
      int fr = numeric_rank(rows, rep.rank_threshold).rank;
      rep.min_family_rank = std::min(rep.min_family_rank, fr);
      ++rep.families[certifier].certified_here;
    } else {
      rep.min_family_rank = 0;
    }
  }
  if (rep.min_sigma == 1e300) rep.min_sigma = 0;
  rep.residual_ok = rep.residual_failures == 0;
  rep.rank_ok = rep.rank_failures == 0 && rep.min_rank == n;
  rep.pass = rep.residual_ok && rep.rank_ok;
  return rep;
}

GraphRegularityReport graph_regularity_check(const LocalImmersion& f, const DifferentialForm& g0, int samples,
                                             double lo, double hi, std::uint64_t seed) {
  GraphRegularityReport rep;
  const int n = f.n, k = f.k;
  if (g0.degree() != k) throw DimensionError("g must have the degree of the target form");
  if (g0.chart_dim() > n) throw DimensionError("g lives on more coordinates than the chart");
  DifferentialForm g = g0.chart_dim() == n ? g0 : g0.with_chart_dim(n);
  auto cc = check_closed(g, 256, lo, hi);
  if (!cc.closed) throw NotClosedError(cc.offending, cc.offending_expression, cc.max_residual);

  const auto pts = sobol_box(n, samples, lo, hi, seed);
  for (const auto& z : pts)
    if (numeric_rank(f.map.jacobian(z)).rank < n)
      throw PreconditionError("f is not an immersion: Jacobian rank below " + std::to_string(n));

  const int N = static_cast<int>(f.blocks.size());
  const int P = n + N * k;
  rep.chart_dim = n;
  rep.k = k;
  rep.product_dim = P;
  rep.required_rank = static_cast<int>(binomial(n, k - 1).get_si());

  DifferentialForm target(P, k);
  const AltForm<Rational> beta = standard_beta<Rational>(N, k);
  for (const auto& [I, v] : beta.coefficients()) {
    IndexTuple J = I;
    for (int& t : J) t += n;
    target.add(J, SmoothFn::constant(P, v));
  }
  for (const auto& [I, c] : g.coefficients()) target.add(I, -c.with_arity(P));
  DifferentialForm beta_hat = poincare_primitive(target, std::vector<Rational>(P, Rational(0)));
  DifferentialForm dbh = exterior_d(beta_hat);
  rep.primitive_terms = beta_hat.coefficients().size();
  rep.primitive_exact = dbh.is_polynomial() && target.is_polynomial() && dbh.equals_exactly(target);

  rep.min_rank = rep.required_rank;
  rep.min_condition = 1e300;
  rep.min_sigma = 1e300;
  for (const auto& z : pts) {
    ++rep.samples;
    auto fz = f.map.eval(z);
    std::vector<double> Fz(z.begin(), z.end());
    Fz.insert(Fz.end(), fz.begin(), fz.end());
    Matrix<double> DF(P, n);
    for (int i = 0; i < n; ++i) DF(i, i) = 1.0;
    Matrix<double> Df = f.map.jacobian(z);
    for (int r = 0; r < Df.rows; ++r)
      for (int c = 0; c < n; ++c) DF(n + r, c) = Df(r, c);
    auto nreg = is_regular_numeric(dbh.at(Fz), DF);
    rep.min_rank = std::min(rep.min_rank, nreg.rank);
    rep.max_condition = std::max(rep.max_condition, nreg.condition);
    rep.min_condition = std::min(rep.min_condition, nreg.condition);
    rep.min_sigma = std::min(rep.min_sigma, nreg.sigma_min);
  }
  if (rep.samples == 0) rep.min_condition = rep.min_sigma = 0;
  rep.regular = rep.samples > 0 && rep.min_rank == rep.required_rank;
  return rep;
}

}  // namespace unispace
