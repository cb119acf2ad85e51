#include "unispace/io.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace unispace;
using io::json;

namespace {

constexpr int kPass = 0;
constexpr int kInputError = 1;
constexpr int kFail = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
T env_default(const char* name, T fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  std::istringstream in(v);
  T out;
  if (!(in >> out)) throw UsageError(std::string("cannot parse ") + name + "=" + v);
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

json tool_block() { return {{"name", "unispace"}, {"version", UNISPACE_VERSION}}; }

void maybe_write(const std::string& path, const json& j) {
  if (!path.empty()) io::write_file(path, j);
}

struct Sampling {
  int samples = 1000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int shrink_m = 1;

  void load_env() {
    samples = env_default("UNISPACE_SAMPLES", samples);
    tol = env_default("UNISPACE_TOL", tol);
    seed = env_default("UNISPACE_SEED", seed);
    shrink_m = env_default("UNISPACE_SHRINK_M", shrink_m);
  }
  void check() const {
    if (samples < 1) throw UsageError("--samples must be >= 1");
    if (!(tol > 0)) throw UsageError("--tol must be positive");
    if (shrink_m < 1) throw UsageError("--shrink-m must be >= 1");
  }
};

void print_report(const VerificationReport& r) {
  std::cout << "samples            " << r.samples << "\n"
            << "max |f*beta - w|   " << r.max_residual << "  (tol " << r.tol << ")\n"
            << "min Jacobian rank  " << r.min_rank << " / " << r.required_rank << "\n"
            << "min sigma          " << r.min_sigma << "\n"
            << "image radius       " << r.image_radius << "\n"
            << "verdict            " << (r.pass ? "PASS" : "FAIL") << "\n";
}

json report_json(const VerificationReport& r, const Sampling& s, const json& inputs, const AssembledImmersion& A) {
  return {{"tool", tool_block()},
          {"inputs", inputs},
          {"parameters", {{"samples", s.samples}, {"tol", s.tol}, {"seed", s.seed}, {"shrink_m", A.scale}}},
          {"verification", io::to_json(r)},
          {"shrink", io::to_json(A.shrink_info)},
          {"metadata", json::object()}};
}

int cmd_dims(int m, int k, int n, const std::string& out) {
  if (k < 2) throw UsageError("--k must be >= 2");
  if (m < 0 && n < 0) throw UsageError("give --m and/or --n");
  json j = {{"k", k}};
  std::cout << "k = " << k << "\n";
  if (m >= 0) {
    Integer s, d;
    try {
      s = s_dim(m, k);
      d = d_dim(m, k);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    std::cout << "m = " << m << "\n  s(m,k) = " << s << "\n  d(m,k) = " << d << "\n";
    j["m"] = m;
    j["s"] = s.get_str();
    j["d"] = d.get_str();
  }
  if (n >= 0) {
    Integer a, b;
    try {
      a = n1(n, k);
      b = n1_bar(n, k);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    std::cout << "n = " << n << "\n  N1 = " << a << "\n  N1_bar = " << b << "\n";
    j["n"] = n;
    j["N1"] = a.get_str();
    j["N1_bar"] = b.get_str();
  }
  maybe_write(out, j);
  return kPass;
}

int cmd_delta(int l, int k, const std::string& out) {
  Integer sum, rec;
  Rational closed;
  try {
    sum = delta_sum(l, k);
    rec = delta_recursion(l, k);
    closed = delta_closed_form(l, k);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const bool agree = sum == rec;
  std::cout << "delta(" << l << "," << k << ")\n  sum        " << sum << "\n  recursion  " << rec
            << "\n  closed     " << to_string(closed) << (closed == Rational(sum) ? "" : "  (differs)") << "\n";
  maybe_write(out, {{"l", l},
                    {"k", k},
                    {"sum", sum.get_str()},
                    {"recursion", rec.get_str()},
                    {"closed_form", to_string(closed)},
                    {"agree", agree},
                    {"closed_form_agrees", closed == Rational(sum)}});
  return agree ? kPass : kFail;
}

int cmd_regular_subspace(int l, int k, const std::string& out) {
  if (k < 2 || l < k) throw UsageError("need k >= 2 and l >= k");
  Staircase s = staircase_embedding(l, k, true);
  std::cout << "l = " << l << ", k = " << k << ": " << s.map.rows << " x " << s.map.cols << " map, " << s.delta
            << " blocks\n";
  for (const auto& st : s.stages)
    std::cout << "  stage " << st.from_dim << " -> " << st.from_dim + 1 << ": +" << st.new_blocks << " blocks, span "
              << (st.spanning_holds ? "ok" : "FAILS") << ", rank " << st.achieved_rank << " / " << st.required_rank
              << "\n";
  std::cout << "certificate rank " << s.certificate.achieved_rank << " / " << s.certificate.required_rank << ": "
            << (s.ok() ? "regular" : "NOT regular") << "\n";
  maybe_write(out, io::to_json(s));
  if (!s.ok()) {
    const StageRecord* f = s.first_failure();
    if (f) std::cerr << "construction fails at stage " << f->from_dim << " -> " << f->from_dim + 1 << "\n";
    return kFail;
  }
  return kPass;
}

int cmd_check_regular(const std::string& form, const std::string& sub, const std::string& out) {
  auto beta = io::altform_from_json(io::read_file(form));
  auto T = io::subspace_from_json(io::read_file(sub));
  auto c = is_regular(beta, T);
  std::cout << "contraction rank " << c.achieved_rank << " / " << c.required_rank << ": "
            << (c.regular ? "regular" : "NOT regular") << "\n";
  maybe_write(out, io::to_json(c));
  return c.regular ? kPass : kFail;
}

int cmd_cover(const std::string& complex, const std::string& out, int density, int subdivisions, int samples,
              std::uint64_t seed) {
  CoverOptions opt;
  opt.density = density;
  opt.max_subdivisions = subdivisions;
  auto K = io::complex_from_json(io::read_file(complex));
  auto cov = nash_cover(K, opt);
  auto pc = check_partition(cov, samples, seed);
  const bool disjoint = families_disjoint(cov);
  std::cout << cov.family_count() << " families, " << cov.ball_count() << " balls\n"
            << "coverage  " << (cov.coverage.covered ? "complete" : "GAPS") << " (" << cov.coverage.points_checked
            << " lattice points, " << cov.coverage.gaps << " gaps)\n"
            << "disjoint  " << (disjoint ? "yes" : "NO") << "\n"
            << "max |sum rho - 1| " << pc.max_sum_error << "\n";
  if (!cov.coverage.covered && !cov.coverage.first_gap.empty()) {
    std::cerr << "first gap at (";
    for (size_t a = 0; a < cov.coverage.first_gap.size(); ++a) std::cerr << (a ? "," : "") << cov.coverage.first_gap[a];
    std::cerr << ") in simplex " << cov.coverage.first_gap_simplex << "\n";
  }
  json j = io::to_json(cov);
  j["partition"] = io::to_json(pc);
  j["families_disjoint"] = disjoint;
  maybe_write(out, j);
  return cov.coverage.covered && disjoint ? kPass : kFail;
}

int cmd_primitive(const std::string& form, const std::string& out, const std::vector<std::string>& center) {
  auto w = io::form_from_json(io::read_file(form));
  std::vector<Rational> c(w.chart_dim(), Rational(0));
  if (!center.empty()) {
    if (static_cast<int>(center.size()) != w.chart_dim()) throw UsageError("--center needs one value per coordinate");
    for (size_t i = 0; i < center.size(); ++i) c[i] = parse_rational(center[i]);
  }
  auto phi = poincare_primitive(w, c);
  json j = io::to_json(phi);
  if (w.is_polynomial()) j["exact_check"] = exterior_d(phi).equals_exactly(w);
  for (const auto& [t, f] : phi.coefficients()) std::cout << tuple_key(t) << ": " << f.to_string() << "\n";
  if (out.empty()) std::cout << j.dump(2) << "\n";
  maybe_write(out, j);
  return kPass;
}

int finish_embed(const AssembledImmersion& A0, const DifferentialForm& omega, const Sampling& s, const json& inputs,
                 const std::string& outdir) {
  json imm = io::to_json(A0);
  imm["omega"] = io::to_json(omega);
  std::filesystem::create_directories(outdir);
  const std::string imm_path = (std::filesystem::path(outdir) / "immersion.json").string();
  io::write_file(imm_path, imm);
  AssembledImmersion A = io::immersion_from_json(io::read_file(imm_path));
  auto rep = verify(A, omega, s.samples, s.tol, s.seed);
  print_report(rep);
  io::write_file((std::filesystem::path(outdir) / "report.json").string(), report_json(rep, s, inputs, A));
  return rep.pass ? kPass : kFail;
}

int cmd_embed(const std::string& complex, const std::string& form, const std::string& primitive, Sampling s,
              const std::string& outdir) {
  s.check();
  if (form.empty() == primitive.empty()) throw UsageError("give exactly one of --form and --primitive");
  json inputs = {{"complex", sha256_file(complex)}};
  auto K = io::complex_from_json(io::read_file(complex));
  DifferentialForm phi(0, 0), omega(0, 0);
  if (!primitive.empty()) {
    inputs["primitive"] = sha256_file(primitive);
    phi = io::form_from_json(io::read_file(primitive));
    omega = exterior_d(phi);
  } else {
    inputs["form"] = sha256_file(form);
    omega = io::form_from_json(io::read_file(form));
    phi = poincare_primitive(omega);
  }
  if (phi.chart_dim() != K.ambient) throw UsageError("form lives on R^" + std::to_string(phi.chart_dim()) +
                                                     " but the complex sits in R^" + std::to_string(K.ambient));
  auto cov = nash_cover(K);
  if (!cov.coverage.covered) {
    std::ostringstream msg;
    msg << "coverage failure: lattice point (";
    for (size_t a = 0; a < cov.coverage.first_gap.size(); ++a) msg << (a ? "," : "") << cov.coverage.first_gap[a];
    msg << ") in simplex " << cov.coverage.first_gap_simplex << " lies in no ball";
    throw GapError(msg.str(), cov.coverage.first_gap);
  }
  AssembledImmersion A = assemble(cov, phi, {s.samples, s.seed});
  if (s.shrink_m > 1) A = shrink(A, s.shrink_m);
  return finish_embed(A, omega, s, inputs, outdir);
}

int cmd_verify(const std::string& path, const std::string& form, Sampling s, const std::string& out) {
  s.check();
  json j = io::read_file(path);
  AssembledImmersion A = io::immersion_from_json(j);
  json inputs = {{"immersion", sha256_file(path)}};
  DifferentialForm omega(0, 0);
  if (!form.empty()) {
    omega = io::form_from_json(io::read_file(form));
    inputs["form"] = sha256_file(form);
  } else if (j.contains("omega")) {
    omega = io::form_from_json(j.at("omega"));
  } else {
    omega = exterior_d(A.phi);
  }
  auto rep = verify(A, omega, s.samples, s.tol, s.seed);
  print_report(rep);
  maybe_write(out, report_json(rep, s, inputs, A));
  return rep.pass ? kPass : kFail;
}

int cmd_shrink(const std::string& path, int m, double bound, int refinements, Sampling s, const std::string& outdir) {
  s.shrink_m = m;
  s.check();
  json j = io::read_file(path);
  AssembledImmersion A = io::immersion_from_json(j);
  DifferentialForm omega = j.contains("omega") ? io::form_from_json(j.at("omega")) : exterior_d(A.phi);
  A = shrink(A, m, bound, refinements);
  for (const auto& note : A.shrink_info.notes) std::cout << "note: " << note << "\n";
  return finish_embed(A, omega, s, {{"immersion", sha256_file(path)}}, outdir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immersions pulling a standard form back to an exact form"};
  app.require_subcommand(1);
  app.set_version_flag("--version", UNISPACE_VERSION);

  Sampling s;
  try {
    s.load_env();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  int m = -1, k = 3, n = -1, l = 0;
  std::string out, complex, form, primitive, subspace, immersion;
  int density = 1000, subdivisions = 1, refinements = 1;
  double bound = 0.0;
  std::vector<std::string> center;

  auto* dims = app.add_subcommand("dims", "dimension formulas s(m,k), d(m,k), N1, N1_bar");
  dims->add_option("--m", m, "manifold dimension for s and d");
  dims->add_option("--k", k, "form degree")->required();
  dims->add_option("--n", n, "manifold dimension for N1");
  dims->add_option("--json", out, "write JSON here");

  auto* del = app.add_subcommand("delta", "number of blocks of the staircase map");
  del->add_option("--l", l)->required();
  del->add_option("--k", k)->required();
  del->add_option("--json", out);

  auto* reg = app.add_subcommand("regular-subspace", "build and certify a regular subspace");
  reg->add_option("--l", l)->required();
  reg->add_option("--k", k)->required();
  reg->add_option("--out", out, "certificate JSON");

  auto* chk = app.add_subcommand("check-regular", "exact regularity test of a subspace");
  chk->add_option("--form", form, "constant form JSON")->required();
  chk->add_option("--subspace", subspace, "subspace JSON")->required();
  chk->add_option("--out", out);

  auto* cov = app.add_subcommand("cover", "Nash covering of a simplicial complex");
  cov->add_option("--complex", complex)->required();
  cov->add_option("--out", out);
  cov->add_option("--density", density, "lattice points per simplex")->check(CLI::PositiveNumber);
  cov->add_option("--max-subdivisions", subdivisions)->check(CLI::NonNegativeNumber);
  cov->add_option("--samples", s.samples, "partition-of-unity samples");
  cov->add_option("--seed", s.seed);

  auto* prim = app.add_subcommand("primitive", "primitive of a closed form");
  prim->add_option("--form", form)->required();
  prim->add_option("--out", out);
  prim->add_option("--center", center, "cone centre, one rational per coordinate");

  auto* emb = app.add_subcommand("embed", "assemble and verify the immersion");
  emb->add_option("--complex", complex)->required();
  emb->add_option("--form", form, "closed k-form");
  emb->add_option("--primitive", primitive, "(k-1)-form phi, omega = d phi");
  emb->add_option("--samples", s.samples);
  emb->add_option("--tol", s.tol);
  emb->add_option("--shrink-m", s.shrink_m);
  emb->add_option("--seed", s.seed);
  emb->add_option("--out", out, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "re-verify an immersion file");
  ver->add_option("--immersion", immersion)->required();
  ver->add_option("--form", form, "target form (default: the one stored with the immersion)");
  ver->add_option("--samples", s.samples);
  ver->add_option("--tol", s.tol);
  ver->add_option("--seed", s.seed);
  ver->add_option("--out", out, "report JSON");

  int shrink_m = 2;
  auto* shr = app.add_subcommand("shrink", "apply the block shrink to an immersion file");
  shr->add_option("--immersion", immersion)->required();
  shr->add_option("--m", shrink_m)->required();
  shr->add_option("--bound", bound, "requested image radius, recorded only");
  shr->add_option("--max-refinements", refinements);
  shr->add_option("--samples", s.samples);
  shr->add_option("--tol", s.tol);
  shr->add_option("--seed", s.seed);
  shr->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*dims) return cmd_dims(m, k, n, out);
    if (*del) return cmd_delta(l, k, out);
    if (*reg) return cmd_regular_subspace(l, k, out);
    if (*chk) return cmd_check_regular(form, subspace, out);
    if (*cov) return cmd_cover(complex, out, density, subdivisions, s.samples, s.seed);
    if (*prim) return cmd_primitive(form, out, center);
    if (*emb) return cmd_embed(complex, form, primitive, s, out);
    if (*ver) return cmd_verify(immersion, form, s, out);
    if (*shr) return cmd_shrink(immersion, shrink_m, bound, refinements, s, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
