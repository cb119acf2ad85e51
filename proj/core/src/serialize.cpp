#include "unispace/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace unispace::io {

namespace {

const char* kImmersionFormat = "unispace-immersion/1";

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw FormatError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json tuple_json(const IndexTuple& t) {
  json a = json::array();
  for (int i : t) a.push_back(i + 1);
  return a;
}

IndexTuple tuple_from_json(const json& j) {
  IndexTuple t;
  for (const auto& v : j) t.push_back(v.get<int>() - 1);
  return t;
}

json vector_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

std::vector<Rational> vector_from_json(const json& j) {
  std::vector<Rational> v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

json doubles_json(const std::vector<double>& v) { return json(v); }

std::string ball_name(const char* prefix, int family, int index) {
  return std::string(prefix) + "_" + std::to_string(family) + "_" + std::to_string(index);
}

SmoothFn parse_expr(const json& j, int arity, const SmoothFn::Env* env = nullptr) {
  if (!j.is_string()) throw FormatError("expressions must be strings");
  try {
    return SmoothFn::parse(j.get<std::string>(), arity, env);
  } catch (const std::exception& e) {
    throw FormatError("cannot parse \"" + j.get<std::string>() + "\": " + e.what());
  }
}

}  // namespace

json to_json(const Rational& q) {
  const double d = q.get_d();
  if (std::isfinite(d) && rational_from_double(d) == q) {
    if (mpz_cmp_ui(q.get_den_mpz_t(), 1) == 0 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return d;
  }
  return to_string(q);
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw FormatError("expected a number or a rational string");
}

json to_json(const Matrix<Rational>& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Matrix<Rational> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a non-empty list of rows");
  const int cols = static_cast<int>(j[0].size());
  Matrix<Rational> m(static_cast<int>(j.size()), cols);
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw FormatError("ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = rational_from_json(j[r][c]);
  }
  return m;
}

json to_json(const SimplicialComplex& K) {
  json v = json::array();
  for (const auto& p : K.vertices) v.push_back(vector_json(p));
  json periodic = json::array();
  for (int a = 0; a < K.ambient; ++a) periodic.push_back(!K.periodic.empty() && K.periodic[a]);
  return {{"dim", K.dim}, {"vertices", v}, {"simplices", K.simplices}, {"periodic", periodic}};
}

SimplicialComplex complex_from_json(const json& j) {
  SimplicialComplex K;
  K.dim = int_field(j, "dim");
  for (const auto& p : field(j, "vertices")) K.vertices.push_back(vector_from_json(p));
  if (K.vertices.empty()) throw FormatError("complex has no vertices");
  K.ambient = static_cast<int>(K.vertices[0].size());
  for (const auto& s : field(j, "simplices")) {
    auto ids = s.get<std::vector<int>>();
    std::sort(ids.begin(), ids.end());
    K.simplices.push_back(ids);
  }
  K.periodic.assign(K.ambient, false);
  if (j.contains("periodic")) {
    const auto& p = j.at("periodic");
    if (static_cast<int>(p.size()) != K.ambient) throw FormatError("\"periodic\" needs one flag per axis");
    for (int a = 0; a < K.ambient; ++a) K.periodic[a] = p[a].get<bool>();
  }
  K.validate();
  return K;
}

json to_json(const DifferentialForm& a) {
  json c = json::object();
  for (const auto& [t, f] : a.coefficients()) c[tuple_key(t)] = f.to_string();
  return {{"chart_dim", a.chart_dim()}, {"degree", a.degree()}, {"coeffs", c}};
}

DifferentialForm form_from_json(const json& j) {
  const int n = int_field(j, "chart_dim"), k = int_field(j, "degree");
  if (n < 0 || k < 0) throw FormatError("negative chart dimension or degree");
  DifferentialForm a(n, k);
  if (j.contains("coeffs"))
    for (const auto& [key, expr] : j.at("coeffs").items()) a.add(parse_tuple_key(key), parse_expr(expr, n));
  return a;
}

json to_json(const SmoothMap& f) {
  json c = json::array();
  for (const auto& g : f.components) c.push_back(g.to_string());
  return {{"source_dim", f.source_dim}, {"components", c}};
}

SmoothMap map_from_json(const json& j) {
  const int n = int_field(j, "source_dim");
  std::vector<SmoothFn> comps;
  for (const auto& e : field(j, "components")) comps.push_back(parse_expr(e, n));
  return SmoothMap(n, comps);
}

json to_json(const AltForm<Rational>& a) {
  json c = json::object();
  for (const auto& [t, v] : a.coefficients()) c[tuple_key(t)] = to_json(v);
  return {{"dim", a.ambient_dim()}, {"degree", a.degree()}, {"coeffs", c}};
}

AltForm<Rational> altform_from_json(const json& j) {
  AltForm<Rational> a(int_field(j, "dim"), int_field(j, "degree"));
  for (const auto& [key, v] : field(j, "coeffs").items()) a.add(parse_tuple_key(key), rational_from_json(v));
  return a;
}

json to_json(const Subspace& T) {
  json vecs = json::array();
  for (int c = 0; c < T.dim(); ++c) {
    json v = json::array();
    for (int r = 0; r < T.ambient_dim(); ++r) v.push_back(to_json(T.basis(r, c)));
    vecs.push_back(v);
  }
  return {{"ambient", T.ambient_dim()}, {"vectors", vecs}};
}

Subspace subspace_from_json(const json& j) {
  const int D = int_field(j, "ambient");
  const auto& vecs = field(j, "vectors");
  Matrix<Rational> B(D, static_cast<int>(vecs.size()));
  for (int c = 0; c < B.cols; ++c) {
    if (static_cast<int>(vecs[c].size()) != D) throw FormatError("subspace vector of the wrong length");
    for (int r = 0; r < D; ++r) B(r, c) = rational_from_json(vecs[c][r]);
  }
  return Subspace(B);
}

json to_json(const RegularityCertificate& c) {
  return {{"regular", c.regular},
          {"achieved_rank", c.achieved_rank},
          {"required_rank", integer_json(c.required_rank)},
          {"form", to_json(c.form)},
          {"subspace", to_json(c.subspace)},
          {"contraction", to_json(c.contraction)}};
}

json to_json(const StageRecord& s) {
  return {{"from_dim", s.from_dim},
          {"to_dim", s.from_dim + 1},
          {"new_blocks", s.new_blocks},
          {"blocks_after", s.delta_after},
          {"span_rank", s.span_rank},
          {"span_with_target", s.span_with_target},
          {"spanning_holds", s.spanning_holds},
          {"achieved_rank", s.achieved_rank},
          {"required_rank", integer_json(s.required_rank)},
          {"regular", s.regular}};
}

json to_json(const Staircase& s) {
  json stages = json::array();
  for (const auto& st : s.stages) stages.push_back(to_json(st));
  return {{"l", s.l},     {"k", s.k},           {"delta", s.delta},
          {"rows", s.map.rows}, {"cols", s.map.cols}, {"matrix", to_json(s.map)},
          {"stages", stages}, {"ok", s.ok()},   {"certificate", to_json(s.certificate)}};
}

json to_json(const FormalMonomorphism& f) {
  json blocks = json::array();
  for (const auto& t : f.block_tuples) blocks.push_back(tuple_json(t));
  return {{"m", f.m},
          {"k", f.k},
          {"l_reg", f.l_reg},
          {"regular_blocks", f.regular_blocks},
          {"g", to_json(f.g)},
          {"g1", to_json(f.g1)},
          {"correction_blocks", blocks},
          {"s", to_json(f.s)},
          {"beta", to_json(f.beta_target)},
          {"pulled_back", to_json(f.pulled_back)},
          {"identity_holds", f.identity_holds},
          {"rank", f.rank},
          {"injective", f.injective},
          {"regular", f.certificate.regular},
          {"regular_rank", f.certificate.achieved_rank},
          {"regular_required", integer_json(f.certificate.required_rank)}};
}

json to_json(const CoverOptions& o) {
  return {{"c", to_json(o.c)},
          {"seed_lo", to_json(o.seed_lo)},
          {"seed_hi", to_json(o.seed_hi)},
          {"density", o.density},
          {"max_subdivisions", o.max_subdivisions}};
}

CoverOptions cover_options_from_json(const json& j) {
  CoverOptions o;
  if (j.contains("c")) o.c = rational_from_json(j.at("c"));
  if (j.contains("seed_lo")) o.seed_lo = rational_from_json(j.at("seed_lo"));
  if (j.contains("seed_hi")) o.seed_hi = rational_from_json(j.at("seed_hi"));
  if (j.contains("density")) o.density = j.at("density").get<int>();
  if (j.contains("max_subdivisions")) o.max_subdivisions = j.at("max_subdivisions").get<int>();
  return o;
}

json to_json(const CoverageReport& r) {
  return {{"covered", r.covered},
          {"points_checked", r.points_checked},
          {"gaps", r.gaps},
          {"lattice_denominator", r.lattice_denominator},
          {"first_gap", doubles_json(r.first_gap)},
          {"first_gap_simplex", r.first_gap_simplex},
          {"worst_ratio", r.worst_ratio},
          {"subdivisions", r.subdivisions},
          {"notes", r.notes}};
}

json to_json(const PartitionCheck& p) {
  return {{"samples", p.samples},
          {"max_sum_error", p.max_sum_error},
          {"min_seed_sum", p.min_seed_sum},
          {"rho_in_unit_interval", p.rho_in_unit_interval},
          {"max_chi_rho_defect", p.max_chi_rho_defect},
          {"rho_support_in_balls", p.rho_support_in_balls},
          {"chi_support_in_balls", p.chi_support_in_balls},
          {"first_uncovered", doubles_json(p.first_uncovered)}};
}

namespace {

SmoothFn::NameMap seed_names(const NashCovering& cov) {
  SmoothFn::NameMap names;
  for (const auto& fam : cov.families)
    for (const auto& b : fam) names[b.seed.node()] = ball_name("b", b.family, b.index);
  return names;
}

json balls_json(const NashCovering& cov, const std::vector<std::vector<SmoothFn>>* rho, json& defs) {
  auto names = seed_names(cov);
  json families = json::array();
  for (const auto& fam : cov.families) {
    json list = json::array();
    for (const auto& b : fam) {
      list.push_back({{"face", b.face}, {"center", vector_json(b.center)}, {"radius", to_json(b.radius)}});
      defs[ball_name("b", b.family, b.index)] = b.seed.to_string();
      defs[ball_name("chi", b.family, b.index)] = b.chi.to_string();
      SmoothFn r = rho ? (*rho)[b.family][b.index] : cov.rho_local(b);
      defs[ball_name("rho", b.family, b.index)] = r.to_string(&names);
    }
    families.push_back(list);
  }
  return families;
}

}  // namespace

json to_json(const NashCovering& cov) {
  json defs = json::object();
  json fams = balls_json(cov, nullptr, defs);
  return {{"complex", to_json(cov.complex)},
          {"options", to_json(cov.options)},
          {"families", fams},
          {"defs", defs},
          {"coverage", to_json(cov.coverage)}};
}

json to_json(const ShrinkInfo& s) {
  return {{"m", s.m},
          {"requested_bound", s.requested_bound},
          {"target_piece_radius", s.target_piece_radius},
          {"achieved_piece_radius", s.achieved_piece_radius},
          {"refinements", s.refinements},
          {"notes", s.notes}};
}

json to_json(const AssembledImmersion& A) {
  std::vector<std::vector<SmoothFn>> rho(A.pieces.size());
  for (size_t i = 0; i < A.pieces.size(); ++i)
    for (const auto& P : A.pieces[i]) rho[i].push_back(P.rho);
  json defs = json::object();
  json fams = balls_json(A.cover, &rho, defs);

  SmoothFn::NameMap names = seed_names(A.cover);
  for (const auto& fam : A.pieces)
    for (const auto& P : fam) names[P.rho.node()] = ball_name("rho", P.family, P.ball);

  json blocks = json::array();
  for (const auto& T : A.blocks) blocks.push_back(tuple_json(T));
  json terms = json::array();
  const AltForm<double> beta = A.beta();
  for (const auto& [t, v] : beta.coefficients()) terms.push_back(tuple_key(t));

  json pieces = json::array();
  for (const auto& fam : A.pieces) {
    json list = json::array();
    for (const auto& P : fam) {
      json lambda = json::array();
      for (const auto& l : P.lambda) lambda.push_back(l.to_string(&names));
      list.push_back({{"family", P.family},
                      {"ball", P.ball},
                      {"chart", {{"center", vector_json(P.chart.center)},
                                 {"basis", to_json(P.chart.basis)},
                                 {"translation_only", P.chart.translation_only}}},
                      {"translation", P.translation},
                      {"lambda", lambda}});
    }
    pieces.push_back(list);
  }
  json covering = {{"options", to_json(A.cover.options)},
                   {"families", fams},
                   {"coverage", to_json(A.cover.coverage)},
                   {"ball_count", A.cover.ball_count()}};
  return {{"format", kImmersionFormat},
          {"n", A.n},
          {"k", A.k},
          {"N1", A.N1},
          {"ambient", A.ambient()},
          {"target_dim", A.target_dim()},
          {"scale", A.scale},
          {"complex", to_json(A.cover.complex)},
          {"covering", covering},
          {"phi", to_json(A.phi)},
          {"blocks", blocks},
          {"beta", {{"kind", "standard"}, {"blocks", A.N1 * (A.n + 1)}, {"degree", A.k}, {"terms", terms}}},
          {"defs", defs},
          {"pieces", pieces},
          {"shrink", to_json(A.shrink_info)}};
}

AssembledImmersion immersion_from_json(const json& j) {
  if (!j.contains("format") || j.at("format") != kImmersionFormat) throw FormatError("not an immersion file");
  AssembledImmersion A;
  A.n = int_field(j, "n");
  A.k = int_field(j, "k");
  A.N1 = int_field(j, "N1");
  A.scale = int_field(j, "scale");
  if (A.scale < 1) throw FormatError("scale must be >= 1");
  SimplicialComplex K = complex_from_json(field(j, "complex"));
  if (K.dim != A.n) throw FormatError("complex dimension does not match n");
  const json& cj = field(j, "covering");
  A.cover = cover_balls(K, cover_options_from_json(field(cj, "options")));
  const int d = K.ambient;

  const json& fams = field(cj, "families");
  if (fams.size() != A.cover.families.size()) throw FormatError("covering has the wrong number of families");
  for (size_t i = 0; i < fams.size(); ++i) {
    if (fams[i].size() != A.cover.families[i].size()) throw FormatError("covering family " + std::to_string(i) + " has the wrong size");
    for (size_t b = 0; b < fams[i].size(); ++b) {
      const Ball& B = A.cover.families[i][b];
      if (vector_from_json(field(fams[i][b], "center")) != B.center || rational_from_json(field(fams[i][b], "radius")) != B.radius)
        throw FormatError("ball " + ball_name("b", static_cast<int>(i), static_cast<int>(b)) + " does not match its complex");
    }
  }
  if (cj.contains("coverage")) {
    const json& r = cj.at("coverage");
    A.cover.coverage.covered = r.value("covered", false);
    A.cover.coverage.points_checked = r.value("points_checked", 0L);
    A.cover.coverage.gaps = r.value("gaps", 0L);
    A.cover.coverage.lattice_denominator = r.value("lattice_denominator", 0);
    A.cover.coverage.first_gap = r.value("first_gap", std::vector<double>{});
    A.cover.coverage.first_gap_simplex = r.value("first_gap_simplex", -1);
    A.cover.coverage.worst_ratio = r.value("worst_ratio", 0.0);
    A.cover.coverage.subdivisions = r.value("subdivisions", 0);
    A.cover.coverage.notes = r.value("notes", std::vector<std::string>{});
  }

  const json& defs = field(j, "defs");
  SmoothFn::Env env;
  for (auto& fam : A.cover.families)
    for (auto& B : fam) {
      B.seed = parse_expr(field(defs, ball_name("b", B.family, B.index).c_str()), d);
      B.chi = parse_expr(field(defs, ball_name("chi", B.family, B.index).c_str()), d);
      env[ball_name("b", B.family, B.index)] = B.seed;
    }
  for (const auto& fam : A.cover.families)
    for (const auto& B : fam) {
      SmoothFn r = parse_expr(field(defs, ball_name("rho", B.family, B.index).c_str()), d, &env);
      env[ball_name("rho", B.family, B.index)] = r;
    }

  A.phi = form_from_json(field(j, "phi"));
  if (A.phi.chart_dim() != d || A.phi.degree() != A.k - 1) throw FormatError("phi has the wrong shape");
  for (const auto& t : field(j, "blocks")) A.blocks.push_back(tuple_from_json(t));
  if (A.blocks != enumerate_tuples(A.n, A.k - 1) || static_cast<int>(A.blocks.size()) != A.N1)
    throw FormatError("block table does not match (n, k)");

  const json& pieces = field(j, "pieces");
  if (pieces.size() != A.cover.families.size()) throw FormatError("pieces do not match the covering");
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].size() != A.cover.families[i].size()) throw FormatError("pieces do not match the covering");
    std::vector<Piece> row;
    for (size_t b = 0; b < pieces[i].size(); ++b) {
      const json& pj = pieces[i][b];
      Piece P;
      P.family = static_cast<int>(i);
      P.ball = static_cast<int>(b);
      const json& ch = field(pj, "chart");
      P.chart.n = A.n;
      P.chart.ambient = d;
      P.chart.center = vector_from_json(field(ch, "center"));
      P.chart.basis = matrix_from_json(field(ch, "basis"));
      P.chart.translation_only = field(ch, "translation_only").get<bool>();
      P.chart.periodic = K.periodic;
      if (static_cast<int>(P.chart.center.size()) != d || P.chart.basis.rows != d || P.chart.basis.cols != A.n)
        throw FormatError("chart of the wrong shape");
      P.rho = env.at(ball_name("rho", P.family, P.ball));
      P.translation = field(pj, "translation").get<std::vector<std::vector<double>>>();
      const json& lambda = field(pj, "lambda");
      if (lambda.size() != A.blocks.size() || P.translation.size() != A.blocks.size())
        throw FormatError("piece needs one lambda and one translation per block");
      for (const auto& t : P.translation)
        if (static_cast<int>(t.size()) != A.k) throw FormatError("translation needs k slots");
      for (const auto& e : lambda) P.lambda.push_back(parse_expr(e, A.n, &env));
      row.push_back(std::move(P));
    }
    A.pieces.push_back(std::move(row));
  }
  if (j.contains("shrink")) {
    const json& s = j.at("shrink");
    A.shrink_info.m = s.value("m", 1);
    A.shrink_info.requested_bound = s.value("requested_bound", 0.0);
    A.shrink_info.target_piece_radius = s.value("target_piece_radius", 0.0);
    A.shrink_info.achieved_piece_radius = s.value("achieved_piece_radius", 0.0);
    A.shrink_info.refinements = s.value("refinements", 0);
    A.shrink_info.notes = s.value("notes", std::vector<std::string>{});
  }
  return A;
}

json to_json(const VerificationReport& r) {
  json fams = json::array();
  for (const auto& f : r.families)
    fams.push_back({{"samples_rho_positive", f.samples_rho_positive},
                    {"max_residual_rho_positive", f.max_residual_rho_positive},
                    {"max_residual_rho_zero", f.max_residual_rho_zero},
                    {"certified_here", f.certified_here}});
  return {{"samples", r.samples},
          {"seed", r.seed},
          {"tol", r.tol},
          {"rank_threshold", r.rank_threshold},
          {"max_residual", r.max_residual},
          {"worst_point", doubles_json(r.worst_point)},
          {"min_rank", r.min_rank},
          {"required_rank", r.required_rank},
          {"min_sigma", r.min_sigma},
          {"min_family_rank", r.min_family_rank},
          {"image_radius", r.image_radius},
          {"min_seed_sum", r.min_seed_sum},
          {"max_chi_rho_defect", r.max_chi_rho_defect},
          {"max_partition_error", r.max_partition_error},
          {"residual_failures", r.residual_failures},
          {"rank_failures", r.rank_failures},
          {"families", fams},
          {"residual_ok", r.residual_ok},
          {"rank_ok", r.rank_ok},
          {"pass", r.pass}};
}

json to_json(const GraphRegularityReport& r) {
  return {{"chart_dim", r.chart_dim},         {"k", r.k},
          {"product_dim", r.product_dim},     {"samples", r.samples},
          {"required_rank", r.required_rank}, {"min_rank", r.min_rank},
          {"max_condition", r.max_condition}, {"min_condition", r.min_condition},
          {"min_sigma", r.min_sigma},         {"primitive_exact", r.primitive_exact},
          {"primitive_terms", r.primitive_terms}, {"regular", r.regular}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace unispace::io
