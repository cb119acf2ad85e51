#pragma once

#include "unispace/covering.hpp"
#include "unispace/forms.hpp"
#include "unispace/regularity.hpp"

#include <string>
#include <vector>

namespace unispace {

// sum_j x^{(j,1)} dx^{(j,2)} ^ ... ^ dx^{(j,k)} on R^{N k}; its exterior derivative is standard_beta(N, k).
DifferentialForm gamma_form(int N, int k);

struct LocalImmersion {
  int n = 0;
  int k = 0;
  std::vector<IndexTuple> blocks;  // block b carries the (k-1)-tuple blocks[b]
  SmoothMap map;                   // into R^{blocks.size() * k}
};

// Block T = (t_1 < ... < t_{k-1}) gets components (lambda_T, x^{t_1}, ..., x^{t_{k-1}}).
LocalImmersion local_immersion(const DifferentialForm& phi);
// (x_1, x_2, ..., x_k) -> (x_1/m, m x_2, x_3, ..., x_k) on every block.
LocalImmersion shrink(const LocalImmersion& f, int m);
AltForm<Rational> shrink_block_pullback(int m, int k);

struct Piece {
  int family = 0;
  int ball = 0;
  ChartMap chart;
  SmoothFn rho;                                // ball-localized rho_i (ambient coordinates)
  std::vector<SmoothFn> lambda;                // per block, local coordinates
  std::vector<std::vector<double>> translation; // per block, k slots (slot 0 unused)
};

struct ShrinkInfo {
  int m = 1;
  double requested_bound = 0.0;       // R passed by the caller
  double target_piece_radius = 0.0;   // 1/m^2
  double achieved_piece_radius = 0.0;
  int refinements = 0;
  std::vector<std::string> notes;
};

class AssembledImmersion {
 public:
  int n = 0;
  int k = 0;
  int N1 = 0;
  NashCovering cover;
  DifferentialForm phi{0, 0};
  std::vector<IndexTuple> blocks;
  std::vector<std::vector<Piece>> pieces;  // [family][ball]
  int scale = 1;
  ShrinkInfo shrink_info;

  int ambient() const { return cover.complex.ambient; }
  int target_dim() const { return N1 * k * (n + 1); }
  AltForm<double> beta() const;

  // f(x) and its Jacobian (target_dim x ambient).
  void eval(std::span<const double> x, std::vector<double>& f, Matrix<double>* J) const;
  std::vector<double> eval(std::span<const double> x) const;
};

struct AssembleOptions {
  int check_samples = 1000;
  std::uint64_t seed = 0;
};

AssembledImmersion assemble(const NashCovering& cover, const DifferentialForm& phi, const AssembleOptions& opt = {});

AssembledImmersion shrink(const AssembledImmersion& A, int m, double R = 0.0, int max_refinements = 1,
                          int box_samples = 4096);

struct FamilyDiagnostics {
  long samples_rho_positive = 0;
  double max_residual_rho_positive = 0.0;
  double max_residual_rho_zero = 0.0;
  long certified_here = 0;  // samples whose immersivity this family certified
};

struct VerificationReport {
  long samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double rank_threshold = 1e-8;
  double max_residual = 0.0;
  std::vector<double> worst_point;
  int min_rank = 0;
  int required_rank = 0;
  double min_sigma = 0.0;
  int min_family_rank = 0;  // rank certified by the smallest family with rho_i > 0
  double image_radius = 0.0;
  double min_seed_sum = 0.0;
  double max_chi_rho_defect = 0.0;
  double max_partition_error = 0.0;
  long residual_failures = 0;
  long rank_failures = 0;
  std::vector<FamilyDiagnostics> families;
  bool residual_ok = false;
  bool rank_ok = false;
  bool pass = false;
};

VerificationReport verify(const AssembledImmersion& A, const DifferentialForm& omega, int samples = 1000,
                          double tol = 1e-6, std::uint64_t seed = 0);

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GraphRegularityReport {
  int chart_dim = 0;
  int k = 0;
  int product_dim = 0;
  long samples = 0;
  int required_rank = 0;
  int min_rank = 0;
  double max_condition = 0.0;
  double min_condition = 0.0;
  double min_sigma = 0.0;
  bool primitive_exact = false;  // d(beta_hat) equals p*beta - p*g symbolically
  size_t primitive_terms = 0;
  bool regular = false;
};

// Lemma-type check: F = (id, f) is d(beta_hat)-regular with d(beta_hat) = p2*beta - p1*g.
GraphRegularityReport graph_regularity_check(const LocalImmersion& f, const DifferentialForm& g, int samples = 100,
                                             double lo = -1.0, double hi = 1.0, std::uint64_t seed = 0);

}  // namespace unispace
