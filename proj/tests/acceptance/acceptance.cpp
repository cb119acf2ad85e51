// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include "testing.hpp"
#include "unispace/immersion.hpp"
#include "unispace/linalg.hpp"
#include "unispace/regularity.hpp"
#include "unispace/sampling.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace unispace;
using namespace unispace::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_abs(const AltForm<double>& a) {
  double m = 0;
  for (const auto& [t, v] : a.coefficients()) m = std::max(m, std::abs(v));
  return m;
}

void dimension_formulas(Outcome& o) {
  auto t0 = Clock::now();
  int mismatches = 0;
  for (int k = 3; k <= 6; ++k)
    for (int l = k; l <= 40; ++l) mismatches += delta_sum(l, k) != delta_recursion(l, k);
  const double secs = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " sum/recursion mismatches");
  o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
  o.require(delta(3, 3) == 1 && delta(5, 3) == 6 && delta(7, 3) == 13, "delta(3|5|7, 3) != 1, 6, 13");
  o.require(s_dim(3, 3) == 19, "s(3,3) != 19");
  o.require(d_dim(3, 3) == 78, "d(3,3) != 78");
  o.require(n1(3, 3) == 3 && n1_bar(3, 3) == 36, "N1(3,3), N1_bar != 3, 36");
  int closed_off = 0;
  for (int k = 3; k <= 6; ++k)
    for (int l = k; l <= 40; ++l) closed_off += delta_closed_form(l, k) != Rational(delta(l, k));
  o.detail << "sum = recursion on 152 pairs in " << secs << " s; printed closed form differs on " << closed_off
           << " pairs";
}

void regular_subspaces(Outcome& o) {
  auto t0 = Clock::now();
  int good = 0, total = 0;
  std::ostringstream failures;
  for (int k = 3; k <= 5; ++k)
    for (int l = k; l <= k + 6; ++l) {
      ++total;
      try {
        Staircase s = build_regular_subspace(l, k);
        good += s.ok();
      } catch (const ConstructionError& e) {
        const auto& st = e.staircase;
        const StageRecord* f = st.first_failure();
        failures << " (" << k << "," << l << "): rank " << st.certificate.achieved_rank << "/"
                 << st.certificate.required_rank << ", " << st.delta << " blocks";
        if (f) failures << ", stage " << f->from_dim << "->" << f->from_dim + 1;
      }
    }
  const double secs = seconds_since(t0);
  o.require(good == total, std::to_string(total - good) + " of " + std::to_string(total) + " (k,l) fail:" + failures.str());
  o.require(secs < 30, "took " + std::to_string(secs) + " s");
  o.detail << good << "/" << total << " certified in " << secs << " s";
}

void negative_control(Outcome& o) {
  auto c = is_regular(standard_beta<Rational>(2, 3), Subspace::coordinate(6, {0, 1, 3, 4}));
  o.require(!c.regular && c.achieved_rank == 2 && c.required_rank == 6, "unexpected certificate");
  o.detail << "rank " << c.achieved_rank << " of " << c.required_rank << ", regular = " << c.regular;
}

void local_construction(Outcome& o) {
  auto t0 = Clock::now();
  std::mt19937_64 rng(20261016);
  long nonzero = 0, rank_bad = 0, forms = 0;
  const std::pair<int, int> cases[] = {{3, 3}, {4, 3}, {5, 3}, {4, 4}};
  for (auto [n, k] : cases) {
    for (int t = 0; t < 50; ++t) {
      auto phi = random_form(rng, n, k - 1);
      auto f = local_immersion(phi);
      auto diff = pullback(f.map, gamma_form(static_cast<int>(f.blocks.size()), k)) - phi;
      nonzero += !diff.is_zero();
      for (const auto& x : sobol_box(n, 100, -1, 1, static_cast<std::uint64_t>(t) * 100))
        rank_bad += numeric_rank(f.map.jacobian(x)).rank != n;
      ++forms;
    }
  }
  const double secs = seconds_since(t0);
  o.require(nonzero == 0, std::to_string(nonzero) + " forms with nonzero f*gamma - phi");
  o.require(rank_bad == 0, std::to_string(rank_bad) + " rank-deficient samples");
  o.require(secs < 60, "took " + std::to_string(secs) + " s");
  o.detail << forms << " forms, f*gamma = phi exactly, rank n at 100 samples each, " << secs << " s";
}

void homotopy(Outcome& o) {
  std::mt19937_64 rng(5);
  long bad = 0, bad_closed = 0, forms = 0;
  const std::pair<int, int> cases[] = {{3, 3}, {5, 3}};
  for (auto [n, k] : cases) {
    std::vector<Rational> c(n, Rational(0));
    for (int t = 0; t < 50; ++t) {
      auto w = random_form(rng, n, k);
      auto lhs = exterior_d(homotopy_operator(w, c)) + homotopy_operator(exterior_d(w), c);
      bad += !lhs.equals_exactly(w);
      auto closed = exterior_d(random_form(rng, n, k - 1, 3));
      bad_closed += !exterior_d(homotopy_operator(closed, c)).equals_exactly(closed);
      ++forms;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " failures of dH + Hd = id");
  o.require(bad_closed == 0, std::to_string(bad_closed) + " closed forms with dH w != w");
  o.detail << forms << " random forms and " << forms << " closed forms, exact";
}

// Flow of V by one RK4 step on (x, D phi_t).
void flow(const VectorField& V, std::vector<double> x, double t, std::vector<double>& y, Matrix<double>& Dphi) {
  const int n = V.chart_dim;
  auto rhs = [&](const std::vector<double>& s) {
    std::vector<double> out(n + n * n, 0.0);
    std::vector<double> p(s.begin(), s.begin() + n);
    for (int a = 0; a < n; ++a) {
      std::vector<double> g = V.components[a].grad(p);
      out[a] = V.components[a].eval(p);
      for (int j = 0; j < n; ++j)
        for (int b = 0; b < n; ++b) out[n + a * n + j] += g[b] * s[n + b * n + j];
    }
    return out;
  };
  std::vector<double> s(n + n * n, 0.0);
  for (int a = 0; a < n; ++a) {
    s[a] = x[a];
    s[n + a * n + a] = 1;
  }
  auto axpy = [](const std::vector<double>& a, double h, const std::vector<double>& b) {
    std::vector<double> r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += h * b[i];
    return r;
  };
  auto k1 = rhs(s), k2 = rhs(axpy(s, t / 2, k1)), k3 = rhs(axpy(s, t / 2, k2)), k4 = rhs(axpy(s, t, k3));
  for (size_t i = 0; i < s.size(); ++i) s[i] += t / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  y.assign(s.begin(), s.begin() + n);
  Dphi = Matrix<double>(n, n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) Dphi(a, j) = s[n + a * n + j];
}

void cartan(Outcome& o) {
  std::mt19937_64 rng(3);
  const int n = 4;
  const double h = 1e-3;
  double worst = 0;
  for (int pair = 0; pair < 20; ++pair) {
    std::vector<SmoothFn> comps;
    for (int a = 0; a < n; ++a) comps.push_back(SmoothFn::polynomial(random_polynomial(rng, n, 2, 3)));
    VectorField V(n, comps);
    auto a = random_form(rng, n, 1 + pair % 3, 2);
    auto L = lie_derivative(V, a);
    for (const auto& x : sobol_box(n, 5, -1, 1, static_cast<std::uint64_t>(pair) * 5)) {
      auto pulled = [&](double t) {
        std::vector<double> y;
        Matrix<double> J;
        flow(V, x, t, y, J);
        return pullback_linear(J, a.at(y));
      };
      // Fourth-order central difference in t.
      auto oracle = (1 / (12 * h)) * (pulled(-2 * h) - pulled(2 * h) + 8.0 * (pulled(h) - pulled(-h)));
      worst = std::max(worst, max_abs(L.at(x) - oracle));
    }
  }
  o.require(worst < 1e-5, "max deviation " + std::to_string(worst));
  o.detail << "20 pairs x 5 points = 100 samples, max |Cartan - flow| = " << worst;
}

void covering(Outcome& o) {
  struct Case {
    std::string name;
    SimplicialComplex K;
  };
  std::vector<Case> cases;
  for (int n = 1; n <= 4; ++n) cases.push_back({"simplex" + std::to_string(n), standard_simplex(n)});
  cases.push_back({"tetrahedron boundary", regular_tetrahedron_boundary()});
  cases.push_back({"3-torus", bcc_torus(3)});
  for (auto& c : cases) {
    auto cov = nash_cover(c.K);
    const int n = c.K.dim;
    const long per_simplex = cov.coverage.points_checked / static_cast<long>(cov.complex.simplices.size());
    auto pc = check_partition(cov, static_cast<int>(std::min<size_t>(1000 * cov.complex.simplices.size(), 100000)));
    o.require(cov.family_count() == n + 1, c.name + ": family count");
    o.require(families_disjoint(cov), c.name + ": families overlap");
    o.require(cov.coverage.covered && cov.coverage.gaps == 0, c.name + ": coverage gaps");
    o.require(per_simplex >= 1000, c.name + ": only " + std::to_string(per_simplex) + " points per simplex");
    o.require(pc.max_sum_error < 1e-10, c.name + ": sum rho error " + std::to_string(pc.max_sum_error));
    o.detail << c.name << " " << cov.ball_count() << " balls, " << per_simplex << " pts/simplex, |sum rho - 1| <= "
             << pc.max_sum_error << "; ";
  }
}

DifferentialForm torus_phi() {
  DifferentialForm phi(3, 2);
  phi.set({1, 2}, SmoothFn::parse("-cos(2*pi*x1)/(2*pi)", 3));
  return phi;
}

void end_to_end(Outcome& o, AssembledImmersion& A, VerificationReport& base) {
  auto t0 = Clock::now();
  auto phi = torus_phi();
  DifferentialForm omega(3, 3);
  omega.set({0, 1, 2}, SmoothFn::parse("sin(2*pi*x1)", 3));
  auto cov = nash_cover(bcc_torus(3));
  A = assemble(cov, phi);
  base = verify(A, omega, 1000);
  const double secs = seconds_since(t0);
  auto dphi = exterior_d(phi);
  double form_gap = 0;
  for (const auto& x : sobol_box(3, 100, 0, 1)) form_gap = std::max(form_gap, max_abs(dphi.at(x) - omega.at(x)));
  o.require(form_gap < 1e-12, "d(phi) != omega");
  o.require(A.target_dim() == 36, "target dimension " + std::to_string(A.target_dim()));
  o.require(base.max_residual < 1e-6, "residual " + std::to_string(base.max_residual));
  o.require(base.min_rank == 3 && base.rank_failures == 0, "rank deficient samples");
  o.require(secs < 300, "took " + std::to_string(secs) + " s");
  o.detail << "R^" << A.target_dim() << ", " << base.samples << " samples, max residual " << base.max_residual
           << ", min rank " << base.min_rank << ", " << secs << " s";
}

void shrink_trick(Outcome& o, const AssembledImmersion& A, const VerificationReport& base) {
  DifferentialForm omega(3, 3);
  omega.set({0, 1, 2}, SmoothFn::parse("sin(2*pi*x1)", 3));
  double r10 = 0;
  for (int m : {2, 10}) {
    o.require(shrink_block_pullback(m, 3) == basis_form<Rational>(3, {0, 1, 2}), "Phi_m* beta != beta");
    auto S = shrink(A, m);
    auto r = verify(S, omega, 1000);
    o.require(std::abs(r.max_residual - base.max_residual) < 1e-12, "m=" + std::to_string(m) + " residual changed");
    o.require(r.residual_failures == base.residual_failures && r.min_rank == base.min_rank && r.pass == base.pass,
              "m=" + std::to_string(m) + " verdict changed");
    o.detail << "m=" << m << " residual " << r.max_residual << " radius " << r.image_radius << "; ";
    if (m == 10) {
      r10 = r.image_radius;
      for (const auto& note : S.shrink_info.notes) o.detail << note << "; ";
    }
  }
  o.require(r10 < 0.5 * base.image_radius,
            "radius at m=10 is " + std::to_string(r10) + " vs " + std::to_string(base.image_radius) + " at m=1");
  o.detail << "m=1 radius " << base.image_radius;
}

void formal_monomorphisms(Outcome& o) {
  std::mt19937_64 rng(10);
  int bad_identity = 0, bad_injective = 0, bad_regular = 0;
  for (int t = 0; t < 100; ++t) {
    auto g = random_altform(rng, 4, 3);
    auto f = formal_monomorphism(g);
    bad_identity += !(f.identity_holds && pullback_linear(f.s, f.beta_target) == g);
    bad_injective += !(f.injective && exact_rank(f.s) == 4);
    bad_regular += !f.certificate.regular;
  }
  o.require(bad_identity == 0, std::to_string(bad_identity) + " identity failures");
  o.require(bad_injective == 0, std::to_string(bad_injective) + " non-injective");
  o.require(bad_regular == 0, std::to_string(bad_regular) + " regularity failures");
  o.detail << "100 random g on R^4: s*beta = g exactly, rank 4, regular";
}

void graph_regularity(Outcome& o) {
  const char* corpus[][2] = {{"1,2", "x3"}, {"2,3", "x1*x4 + x2^2"}, {"1,4", "sin(x2)*x3"}};
  double worst_cond = 0;
  for (auto& entry : corpus) {
    DifferentialForm phi(4, 2);
    phi.set(parse_tuple_key(entry[0]), SmoothFn::parse(entry[1], 4));
    auto rep = graph_regularity_check(local_immersion(phi), exterior_d(phi), 100);
    o.require(rep.regular && rep.min_rank == 6, std::string("phi = ") + entry[1] + " rank " + std::to_string(rep.min_rank));
    worst_cond = std::max(worst_cond, rep.max_condition);
    o.detail << entry[1] << ": rank " << rep.min_rank << "/" << rep.required_rank << " cond <= " << rep.max_condition
             << (rep.primitive_exact ? " (exact primitive)" : "") << "; ";
  }
}

}  // namespace

int main() {
  int failed = 0;
  AssembledImmersion torus;
  VerificationReport base;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"dimension formulas", dimension_formulas},
      {"regular subspace construction", regular_subspaces},
      {"regularity negative control", negative_control},
      {"local construction", local_construction},
      {"homotopy operator", homotopy},
      {"Cartan formula vs flow", cartan},
      {"Nash covering", covering},
      {"end-to-end torus", [&](Outcome& o) { end_to_end(o, torus, base); }},
      {"shrink trick", [&](Outcome& o) { shrink_trick(o, torus, base); }},
      {"formal monomorphism", formal_monomorphisms},
      {"graph regularity", graph_regularity},
  };
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail.str() << std::endl;
  }
  std::cout << failed << " of " << criteria.size() << " criteria failed" << std::endl;
  return failed ? 1 : 0;
}
