#include "unispace/covering.hpp"

#include "unispace/linalg.hpp"
#include "unispace/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace unispace {

namespace {

Rational round_half(const Rational& q) {
  Rational h = q + Rational(1, 2);
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  return Rational(f);
}

Rational wrap_unit(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - Rational(f);
}

void combinations(const std::vector<int>& s, int size, size_t start, std::vector<int>& cur,
                  std::set<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == size) {
    out.insert(cur);
    return;
  }
  for (size_t i = start; i < s.size(); ++i) {
    cur.push_back(s[i]);
    combinations(s, size, i + 1, cur, out);
    cur.pop_back();
  }
}

// Largest multiple of 2^-20 not above v (v >= 0).
Rational dyadic_floor(double v) {
  Rational r(Integer(static_cast<long>(std::floor(v * 1048576.0))), Integer(1048576));
  r.canonicalize();
  return r;
}

Rational dyadic_ceil(double v) {
  Rational r(Integer(static_cast<long>(std::ceil(v * 1048576.0))), Integer(1048576));
  r.canonicalize();
  return r;
}

}  // namespace

bool SimplicialComplex::any_periodic() const {
  return std::any_of(periodic.begin(), periodic.end(), [](bool b) { return b; });
}

std::vector<std::vector<Rational>> SimplicialComplex::lifted(const std::vector<int>& s) const {
  std::vector<std::vector<Rational>> P;
  for (int v : s) P.push_back(vertices.at(v));
  if (!any_periodic() || P.empty()) return P;
  for (size_t j = 1; j < P.size(); ++j)
    for (int a = 0; a < ambient; ++a)
      if (periodic[a]) {
        Rational d = P[j][a] - P[0][a];
        P[j][a] = P[0][a] + d - round_half(d);
      }
  return P;
}

std::vector<Rational> SimplicialComplex::barycenter(const std::vector<int>& face) const {
  auto P = lifted(face);
  std::vector<Rational> c(ambient, Rational(0));
  for (const auto& p : P)
    for (int a = 0; a < ambient; ++a) c[a] += p[a];
  for (int a = 0; a < ambient; ++a) {
    c[a] /= static_cast<long>(P.size());
    if (!periodic.empty() && periodic[a]) c[a] = wrap_unit(c[a]);
  }
  return c;
}

std::vector<std::vector<int>> SimplicialComplex::faces(int i) const {
  std::set<std::vector<int>> out;
  std::vector<int> cur;
  for (const auto& s : simplices) combinations(s, i + 1, 0, cur, out);
  return {out.begin(), out.end()};
}

Rational SimplicialComplex::gram_volume(const std::vector<int>& s) const {
  auto P = lifted(s);
  const int n = static_cast<int>(P.size()) - 1;
  if (n == 0) return 1;
  Matrix<Rational> G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational dot = 0;
      for (int a = 0; a < ambient; ++a) dot += (P[i + 1][a] - P[0][a]) * (P[j + 1][a] - P[0][a]);
      G(i, j) = dot;
    }
  return determinant(G);
}

Matrix<double> SimplicialComplex::tangent_basis(const std::vector<int>& s) const {
  auto P = lifted(s);
  const int n = static_cast<int>(P.size()) - 1;
  Matrix<double> E(ambient, n);
  std::vector<std::vector<double>> cols;
  for (int j = 1; j <= n; ++j) {
    std::vector<double> v(ambient);
    for (int a = 0; a < ambient; ++a) v[a] = Rational(P[j][a] - P[0][a]).get_d();
    for (const auto& u : cols) {
      double d = 0;
      for (int a = 0; a < ambient; ++a) d += u[a] * v[a];
      for (int a = 0; a < ambient; ++a) v[a] -= d * u[a];
    }
    double nv = 0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    if (nv == 0) throw GeometryError("degenerate simplex");
    for (double& x : v) x /= nv;
    cols.push_back(v);
  }
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < ambient; ++a) E(a, j) = cols[j][a];
  return E;
}

Rational SimplicialComplex::distance2(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
  Rational s = 0;
  for (int i = 0; i < ambient; ++i) {
    Rational d = a[i] - b[i];
    if (!periodic.empty() && periodic[i]) d -= round_half(d);
    s += d * d;
  }
  return s;
}

std::vector<double> SimplicialComplex::wrap(std::vector<double> x) const {
  for (int a = 0; a < ambient; ++a)
    if (!periodic.empty() && periodic[a]) x[a] -= std::floor(x[a]);
  return x;
}

void SimplicialComplex::validate() const {
  if (dim < 0 || ambient < dim) throw GeometryError("complex dimension exceeds ambient dimension");
  if (!periodic.empty() && static_cast<int>(periodic.size()) != ambient)
    throw GeometryError("periodic mask length differs from ambient dimension");
  if (simplices.empty()) throw GeometryError("complex has no simplices");
  for (const auto& v : vertices)
    if (static_cast<int>(v.size()) != ambient) throw GeometryError("vertex with wrong coordinate count");
  std::map<std::vector<int>, int> facets;
  for (const auto& s : simplices) {
    if (static_cast<int>(s.size()) != dim + 1) throw GeometryError("complex is not pure of dimension " + std::to_string(dim));
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= static_cast<int>(vertices.size())) throw GeometryError("vertex index out of range");
      if (i && s[i] <= s[i - 1]) throw GeometryError("simplex vertex ids must be distinct and sorted");
    }
    if (sgn(gram_volume(s)) <= 0) throw GeometryError("zero-volume simplex " + tuple_key(s));
    if (dim >= 1)
      for (size_t skip = 0; skip < s.size(); ++skip) {
        std::vector<int> f;
        for (size_t i = 0; i < s.size(); ++i)
          if (i != skip) f.push_back(s[i]);
        if (++facets[f] > 2) throw GeometryError("facet " + tuple_key(f) + " shared by more than two simplices");
      }
  }
}

SimplicialComplex standard_simplex(int n) {
  SimplicialComplex K;
  K.dim = n;
  K.ambient = n;
  K.periodic.assign(n, false);
  K.vertices.assign(n + 1, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) K.vertices[i + 1][i] = 1;
  std::vector<int> s(n + 1);
  std::iota(s.begin(), s.end(), 0);
  K.simplices = {s};
  return K;
}

SimplicialComplex regular_tetrahedron_boundary() {
  SimplicialComplex K;
  K.dim = 2;
  K.ambient = 3;
  K.periodic.assign(3, false);
  K.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  K.simplices = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  return K;
}

SimplicialComplex bcc_torus(int G) {
  if (G < 3) throw GeometryError("torus grid needs G >= 3 to be a simplicial complex");
  SimplicialComplex K;
  K.dim = 3;
  K.ambient = 3;
  K.periodic.assign(3, true);
  std::map<std::vector<int>, int> ids;
  auto vid = [&](std::vector<int> p) {
    for (int& c : p) c = ((c % (2 * G)) + 2 * G) % (2 * G);
    auto [it, fresh] = ids.try_emplace(p, static_cast<int>(K.vertices.size()));
    if (fresh) {
      std::vector<Rational> x;
      for (int c : p) x.push_back(Rational(Integer(c), Integer(2 * G)));
      for (auto& q : x) q.canonicalize();
      K.vertices.push_back(x);
    }
    return it->second;
  };
  const int corner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int cx = 0; cx < G; ++cx)
    for (int cy = 0; cy < G; ++cy)
      for (int cz = 0; cz < G; ++cz) {
        std::vector<int> cc = {2 * cx + 1, 2 * cy + 1, 2 * cz + 1};
        for (int ax = 0; ax < 3; ++ax) {
          std::vector<int> nb = cc;
          nb[ax] += 2;
          int o0 = (ax + 1) % 3, o1 = (ax + 2) % 3;
          if (o0 > o1) std::swap(o0, o1);
          std::vector<std::vector<int>> cor;
          for (const auto& st : corner) {
            std::vector<int> p = cc;
            p[ax] += 1;
            p[o0] += st[0];
            p[o1] += st[1];
            cor.push_back(p);
          }
          for (int e = 0; e < 4; ++e) {
            std::vector<int> s = {vid(cc), vid(nb), vid(cor[e]), vid(cor[(e + 1) % 4])};
            std::sort(s.begin(), s.end());
            K.simplices.push_back(s);
          }
        }
      }
  return K;
}

SimplicialComplex point_set(const std::vector<std::vector<Rational>>& points) {
  SimplicialComplex K;
  K.dim = 0;
  K.ambient = points.empty() ? 0 : static_cast<int>(points[0].size());
  K.periodic.assign(K.ambient, false);
  K.vertices = points;
  for (size_t i = 0; i < points.size(); ++i) K.simplices.push_back({static_cast<int>(i)});
  return K;
}

SimplicialComplex barycentric_subdivide(const SimplicialComplex& K) {
  SimplicialComplex S;
  S.dim = K.dim;
  S.ambient = K.ambient;
  S.periodic = K.periodic;
  std::map<std::vector<int>, int> idx;
  for (int i = 0; i <= K.dim; ++i)
    for (const auto& f : K.faces(i)) {
      idx[f] = static_cast<int>(S.vertices.size());
      S.vertices.push_back(K.barycenter(f));
    }
  for (const auto& s : K.simplices) {
    std::vector<int> perm = s;
    do {
      std::vector<int> chain;
      for (int j = 0; j <= K.dim; ++j) {
        std::vector<int> f(perm.begin(), perm.begin() + j + 1);
        std::sort(f.begin(), f.end());
        chain.push_back(idx.at(f));
      }
      std::sort(chain.begin(), chain.end());
      S.simplices.push_back(chain);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return S;
}

std::vector<SamplePoint> sample_complex(const SimplicialComplex& K, int count, std::uint64_t offset) {
  std::vector<SamplePoint> out;
  if (count <= 0) return out;
  const int n = K.dim;
  std::vector<double> cum;
  double total = 0;
  for (const auto& s : K.simplices) {
    total += std::sqrt(K.gram_volume(s).get_d());
    cum.push_back(total);
  }
  std::vector<std::vector<std::vector<double>>> lifted;
  for (const auto& s : K.simplices) {
    std::vector<std::vector<double>> P;
    for (const auto& v : K.lifted(s)) P.push_back(to_double(v));
    lifted.push_back(std::move(P));
  }
  SobolSequence seq(n + 1, offset);
  for (int c = 0; c < count; ++c) {
    auto u = seq.next();
    double pick = u[0] * total;
    int si = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
    si = std::min(si, static_cast<int>(cum.size()) - 1);
    std::vector<double> cuts(u.begin() + 1, u.end());
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> lam(n + 1);
    double prev = 0;
    for (int j = 0; j < n; ++j) {
      lam[j] = cuts[j] - prev;
      prev = cuts[j];
    }
    lam[n] = 1.0 - prev;
    std::vector<double> x(K.ambient, 0.0);
    for (int j = 0; j <= n; ++j)
      for (int a = 0; a < K.ambient; ++a) x[a] += lam[j] * lifted[si][j][a];
    out.push_back({K.wrap(std::move(x)), si});
  }
  return out;
}

std::vector<double> ChartMap::to_local(std::span<const double> x) const {
  std::vector<double> d(ambient);
  for (int a = 0; a < ambient; ++a) {
    d[a] = x[a] - center[a].get_d();
    if (!periodic.empty() && periodic[a]) d[a] -= std::nearbyint(d[a]);
  }
  if (translation_only) return d;
  std::vector<double> y(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < ambient; ++a) y[j] += basis(a, j).get_d() * d[a];
  return y;
}

std::vector<double> ChartMap::to_ambient(std::span<const double> y) const {
  std::vector<double> x(ambient);
  for (int a = 0; a < ambient; ++a) {
    x[a] = center[a].get_d();
    for (int j = 0; j < n; ++j) x[a] += basis(a, j).get_d() * y[j];
  }
  return x;
}

Matrix<double> ChartMap::dbasis() const { return to_double(basis); }

struct NashCovering::Index {
  std::vector<double> width;
  std::vector<double> lo;
  std::vector<int> cells;  // per axis
  std::vector<bool> periodic;
  std::unordered_map<long, std::vector<std::pair<int, int>>> grid;  // (family, index)

  long key(const std::vector<int>& c) const {
    long k = 0;
    for (size_t a = 0; a < c.size(); ++a) k = k * (cells[a] + 2) + (c[a] + 1);
    return k;
  }
  int cell_of(int a, double v) const {
    int c = static_cast<int>(std::floor((v - lo[a]) / width[a]));
    if (periodic[a]) c = ((c % cells[a]) + cells[a]) % cells[a];
    else c = std::clamp(c, -1, cells[a]);
    return c;
  }
  template <class F>
  void for_cells(std::span<const double> x, double reach, F&& f) const {
    const int d = static_cast<int>(lo.size());
    std::vector<int> a0(d), a1(d);
    for (int a = 0; a < d; ++a) {
      int c0 = static_cast<int>(std::floor((x[a] - reach - lo[a]) / width[a]));
      int c1 = static_cast<int>(std::floor((x[a] + reach - lo[a]) / width[a]));
      if (periodic[a] && c1 - c0 + 1 >= cells[a]) {
        c0 = 0;
        c1 = cells[a] - 1;
      }
      a0[a] = c0;
      a1[a] = c1;
    }
    std::vector<int> c(a0), w(d);
    std::set<long> seen;
    while (true) {
      for (int a = 0; a < d; ++a) {
        if (periodic[a]) w[a] = ((c[a] % cells[a]) + cells[a]) % cells[a];
        else w[a] = std::clamp(c[a], -1, cells[a]);
      }
      long k = key(w);
      if (seen.insert(k).second) f(k);
      int a = 0;
      while (a < d && ++c[a] > a1[a]) {
        c[a] = a0[a];
        ++a;
      }
      if (a == d) break;
    }
  }
};

size_t NashCovering::ball_count() const {
  size_t s = 0;
  for (const auto& f : families) s += f.size();
  return s;
}

double NashCovering::distance(std::span<const double> x, const Ball& b) const {
  double s = 0;
  for (int a = 0; a < complex.ambient; ++a) {
    double d = x[a] - b.dcenter[a];
    if (!complex.periodic.empty() && complex.periodic[a]) d -= std::nearbyint(d);
    s += d * d;
  }
  return std::sqrt(s);
}

void NashCovering::build_index() {
  auto idx = std::make_shared<Index>();
  const int d = complex.ambient;
  double rmax = 0;
  for (const auto& f : families)
    for (const auto& b : f) rmax = std::max(rmax, b.dradius);
  idx->periodic.assign(d, false);
  for (int a = 0; a < d; ++a) idx->periodic[a] = !complex.periodic.empty() && complex.periodic[a];
  std::vector<double> lo(d, 1e300), hi(d, -1e300);
  for (const auto& v : complex.vertices)
    for (int a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], v[a].get_d());
      hi[a] = std::max(hi[a], v[a].get_d());
    }
  double h = std::max(2.0 * rmax, 1e-9);
  idx->lo.resize(d);
  idx->cells.resize(d);
  idx->width.resize(d);
  while (true) {
    double total = 1;
    for (int a = 0; a < d; ++a) {
      if (idx->periodic[a]) {
        idx->lo[a] = 0.0;
        idx->cells[a] = std::max(1, static_cast<int>(std::floor(1.0 / h)));
        idx->width[a] = 1.0 / idx->cells[a];
      } else {
        idx->lo[a] = lo[a] - rmax;
        idx->cells[a] = std::max(1, static_cast<int>(std::ceil((hi[a] - lo[a] + 2 * rmax) / h)));
        idx->width[a] = h;
      }
      total *= idx->cells[a];
    }
    if (total <= 2e6) break;
    h *= 1.5;
  }
  for (const auto& f : families)
    for (const auto& b : f) idx->for_cells(b.dcenter, b.dradius, [&](long k) { idx->grid[k].emplace_back(b.family, b.index); });
  index_ = idx;
}

std::vector<const Ball*> NashCovering::candidates(std::span<const double> x) const { return candidates(x, 0.0); }

std::vector<const Ball*> NashCovering::candidates(std::span<const double> x, double reach) const {
  std::vector<const Ball*> out;
  if (!index_) throw std::logic_error("covering index not built");
  index_->for_cells(x, reach, [&](long k) {
    auto it = index_->grid.find(k);
    if (it != index_->grid.end())
      for (const auto& [f, i] : it->second) out.push_back(&families[f][i]);
  });
  std::sort(out.begin(), out.end(), [](const Ball* a, const Ball* b) {
    return a->family != b->family ? a->family < b->family : a->index < b->index;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<const Ball*> NashCovering::seed_neighbours(const Ball& b) const {
  const double hi = options.seed_hi.get_d();
  std::vector<const Ball*> out;
  for (const Ball* o : candidates(b.dcenter, b.dradius)) {
    if (distance(b.dcenter, *o) < hi * (b.dradius + o->dradius)) out.push_back(o);
  }
  return out;
}

const Ball* NashCovering::containing(int family, std::span<const double> x) const {
  for (const Ball* b : candidates(x))
    if (b->family == family && distance(x, *b) < b->dradius) return b;
  return nullptr;
}

double NashCovering::seed_sum(std::span<const double> x) const {
  double s = 0;
  for (const Ball* b : candidates(x)) s += b->seed.eval(x);
  return s;
}

std::vector<double> NashCovering::rho_values(std::span<const double> x) const {
  std::vector<double> r(families.size(), 0.0);
  double s = 0;
  for (const Ball* b : candidates(x)) {
    double v = b->seed.eval(x);
    r[b->family] += v;
    s += v;
  }
  if (s > 0)
    for (double& v : r) v /= s;
  return r;
}

std::vector<double> NashCovering::chi_values(std::span<const double> x) const {
  std::vector<double> r(families.size(), 0.0);
  for (const Ball* b : candidates(x)) r[b->family] += b->chi.eval(x);
  return r;
}

SmoothFn NashCovering::rho(int family) const {
  const int d = complex.ambient;
  SmoothFn num = SmoothFn::constant(d, 0), den = SmoothFn::constant(d, 0);
  for (const auto& f : families)
    for (const auto& b : f) {
      den = den + b.seed;
      if (b.family == family) num = num + b.seed;
    }
  return num * pow(den, -1);
}

SmoothFn NashCovering::chi(int family) const {
  SmoothFn s = SmoothFn::constant(complex.ambient, 0);
  for (const auto& b : families.at(family)) s = s + b.chi;
  return s;
}

SmoothFn NashCovering::rho_local(const Ball& b) const {
  SmoothFn den = SmoothFn::constant(complex.ambient, 0);
  for (const Ball* o : seed_neighbours(b)) den = den + o->seed;
  return b.seed * pow(den, -1);
}

ChartMap NashCovering::local_coordinates(const Ball& b) const {
  ChartMap ch;
  ch.n = complex.dim;
  ch.ambient = complex.ambient;
  ch.center = b.center;
  ch.periodic = complex.periodic;
  if (complex.dim == complex.ambient) {
    ch.translation_only = true;
    ch.basis = Matrix<Rational>::identity(complex.ambient);
    return ch;
  }
  ch.translation_only = false;
  std::vector<const std::vector<int>*> star;
  for (const auto& s : complex.simplices)
    if (std::includes(s.begin(), s.end(), b.face.begin(), b.face.end())) star.push_back(&s);
  if (star.empty()) throw GeometryError("ball face has an empty star");
  std::vector<std::vector<Rational>> vecs;
  for (const auto* s : star) {
    auto P = complex.lifted(*s);
    for (const auto& p : P) {
      std::vector<Rational> v(complex.ambient);
      for (int a = 0; a < complex.ambient; ++a) {
        Rational d = p[a] - b.center[a];
        if (!complex.periodic.empty() && complex.periodic[a]) d -= round_half(d);
        v[a] = d;
      }
      vecs.push_back(std::move(v));
    }
  }
  Matrix<Rational> M(static_cast<int>(vecs.size()), complex.ambient);
  for (size_t r = 0; r < vecs.size(); ++r)
    for (int a = 0; a < complex.ambient; ++a) M(static_cast<int>(r), a) = vecs[r][a];
  if (exact_rank(M) != complex.dim)
    throw GeometryError("star of face " + tuple_key(b.face) + " is not flat; curved realizations are not supported");
  Matrix<double> E = complex.tangent_basis(*star[0]);
  ch.basis = Matrix<Rational>(complex.ambient, complex.dim);
  for (int a = 0; a < complex.ambient; ++a)
    for (int j = 0; j < complex.dim; ++j) ch.basis(a, j) = rational_from_double(E(a, j));
  return ch;
}

namespace {

NashCovering build_balls(const SimplicialComplex& K, const CoverOptions& opt) {
  NashCovering cov;
  cov.complex = K;
  cov.options = opt;
  const int d = K.ambient;
  const double c = opt.c.get_d();
  for (int i = 0; i <= K.dim; ++i) {
    auto faces = K.faces(i);
    std::vector<Ball> fam;
    for (size_t j = 0; j < faces.size(); ++j) {
      Ball b;
      b.family = i;
      b.index = static_cast<int>(j);
      b.face = faces[j];
      b.center = K.barycenter(faces[j]);
      b.dcenter = to_double(b.center);
      fam.push_back(std::move(b));
    }
    Rational r;
    if (fam.size() == 1) {
      if (K.dim == 0) {
        r = 1;
      } else {
        Rational far = 0;
        for (const auto& p : K.lifted(fam[0].face)) far = std::max(far, K.distance2(p, fam[0].center));
        double need = std::sqrt(far.get_d()) / opt.seed_lo.get_d();
        r = dyadic_ceil(need * (1 + 1e-9));
      }
    } else {
      double best = 1e300;
      for (size_t a = 0; a < fam.size(); ++a)
        for (size_t b = a + 1; b < fam.size(); ++b) {
          double s = 0;
          for (int x = 0; x < d; ++x) {
            double dd = fam[a].dcenter[x] - fam[b].dcenter[x];
            if (!K.periodic.empty() && K.periodic[x]) dd -= std::nearbyint(dd);
            s += dd * dd;
          }
          best = std::min(best, s);
        }
      r = dyadic_floor(c * std::sqrt(best));
    }
    if (K.any_periodic() && r >= Rational(1, 2)) r = Rational(1, 2) - Rational(1, 1048576);
    if (sgn(r) <= 0) throw GeometryError("family " + std::to_string(i) + " radius collapsed to zero");
    for (auto& b : fam) {
      b.radius = r;
      b.dradius = r.get_d();
      Rational lo = opt.seed_lo * r, hi = opt.seed_hi * r;
      b.seed = SmoothFn::bump(lo, hi, b.center, K.periodic);
      b.chi = SmoothFn::bump(hi, r, b.center, K.periodic);
    }
    cov.families.push_back(std::move(fam));
  }
  cov.build_index();
  return cov;
}

// Barycentric lattice points with denominator q on the simplex, enumerated in a fixed order.
void lattice(int n, int q, std::vector<int>& cur, int left, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    cur.push_back(left);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = 0; a <= left; ++a) {
    cur.push_back(a);
    lattice(n, q, cur, left - a, out);
    cur.pop_back();
  }
}

}  // namespace

NashCovering cover_balls(const SimplicialComplex& K, const CoverOptions& opt) {
  K.validate();
  return build_balls(K, opt);
}

CoverageReport certify_coverage(const NashCovering& cov, const CoverOptions& opt) {
  CoverageReport rep;
  const auto& K = cov.complex;
  const int n = K.dim;
  int q = 1;
  while (n > 0 && binomial(q + n, n) < opt.density) ++q;
  rep.lattice_denominator = q;
  std::vector<std::vector<int>> pts;
  std::vector<int> cur;
  lattice(n, q, cur, q, pts);
  const double frac = opt.seed_lo.get_d();
  for (size_t si = 0; si < K.simplices.size(); ++si) {
    std::vector<std::vector<double>> P;
    for (const auto& v : K.lifted(K.simplices[si])) P.push_back(to_double(v));
    for (const auto& w : pts) {
      std::vector<double> x(K.ambient, 0.0);
      for (int j = 0; j <= n; ++j)
        for (int a = 0; a < K.ambient; ++a) x[a] += (static_cast<double>(w[j]) / q) * P[j][a];
      x = K.wrap(std::move(x));
      double best = 1e300;
      for (const Ball* b : cov.candidates(x)) best = std::min(best, cov.distance(x, *b) / b->dradius);
      rep.worst_ratio = std::max(rep.worst_ratio, best);
      ++rep.points_checked;
      if (!(best < frac)) {
        ++rep.gaps;
        if (rep.covered) {
          rep.first_gap = x;
          rep.first_gap_simplex = static_cast<int>(si);
        }
        rep.covered = false;
        if (opt.stop_at_first_gap) return rep;
      }
    }
  }
  return rep;
}

bool families_disjoint(const NashCovering& cov) {
  const auto& K = cov.complex;
  for (const auto& fam : cov.families)
    for (size_t a = 0; a < fam.size(); ++a)
      for (size_t b = a + 1; b < fam.size(); ++b) {
        double s = 0;
        for (int x = 0; x < K.ambient; ++x) {
          double dd = fam[a].dcenter[x] - fam[b].dcenter[x];
          if (!K.periodic.empty() && K.periodic[x]) dd -= std::nearbyint(dd);
          s += dd * dd;
        }
        double rs = fam[a].dradius + fam[b].dradius;
        if (s > rs * rs * (1 + 1e-6)) continue;
        Rational R = fam[a].radius + fam[b].radius;
        if (!(K.distance2(fam[a].center, fam[b].center) > R * R)) return false;
      }
  return true;
}

NashCovering nash_cover(const SimplicialComplex& K0, const CoverOptions& opt) {
  K0.validate();
  SimplicialComplex K = K0;
  std::vector<std::string> notes;
  for (int attempt = 0;; ++attempt) {
    NashCovering cov = build_balls(K, opt);
    cov.coverage = certify_coverage(cov, opt);
    cov.coverage.subdivisions = attempt;
    if (cov.coverage.covered || attempt >= opt.max_subdivisions || K.dim == 0) {
      if (!cov.coverage.covered) notes.push_back("coverage gaps remain after " + std::to_string(attempt) + " subdivision(s)");
      cov.coverage.notes = notes;
      return cov;
    }
    notes.push_back("attempt " + std::to_string(attempt) + ": " + std::to_string(cov.coverage.gaps) +
                    " uncovered lattice points (worst ratio " + std::to_string(cov.coverage.worst_ratio) +
                    "), retrying on the barycentric subdivision");
    K = barycentric_subdivide(K);
  }
}

PartitionCheck check_partition(const NashCovering& cov, int samples, std::uint64_t offset) {
  PartitionCheck pc;
  pc.min_seed_sum = 1e300;
  const double hi = cov.options.seed_hi.get_d();
  for (const auto& sp : sample_complex(cov.complex, samples, offset)) {
    ++pc.samples;
    double s = 0;
    std::vector<double> fam_seed(cov.families.size(), 0.0), chi(cov.families.size(), 0.0);
    for (const Ball* b : cov.candidates(sp.x)) {
      double v = b->seed.eval(sp.x);
      double c = b->chi.eval(sp.x);
      double dist = cov.distance(sp.x, *b);
      if (v > 0 && dist >= hi * b->dradius) pc.rho_support_in_balls = false;
      if (c > 0 && dist >= b->dradius) pc.chi_support_in_balls = false;
      fam_seed[b->family] += v;
      chi[b->family] += c;
      s += v;
    }
    pc.min_seed_sum = std::min(pc.min_seed_sum, s);
    if (s <= 0) {
      if (pc.first_uncovered.empty()) pc.first_uncovered = sp.x;
      pc.max_sum_error = std::max(pc.max_sum_error, 1.0);
      continue;
    }
    double total = 0;
    for (size_t i = 0; i < fam_seed.size(); ++i) {
      double rho = fam_seed[i] / s;
      if (rho < 0 || rho > 1) pc.rho_in_unit_interval = false;
      pc.max_chi_rho_defect = std::max(pc.max_chi_rho_defect, std::abs(chi[i] * rho - rho));
      total += rho;
    }
    pc.max_sum_error = std::max(pc.max_sum_error, std::abs(total - 1.0));
  }
  return pc;
}

}  // namespace unispace
