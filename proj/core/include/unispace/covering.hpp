#pragma once

#include "unispace/multilinear.hpp"
#include "unispace/smoothfn.hpp"

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace unispace {

struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Vertices live in R^ambient; axes flagged periodic are identified mod 1 (flat torus).
struct SimplicialComplex {
  int dim = 0;
  int ambient = 0;
  std::vector<std::vector<Rational>> vertices;
  std::vector<std::vector<int>> simplices;  // maximal simplices, sorted vertex ids
  std::vector<bool> periodic;

  bool any_periodic() const;
  void validate() const;
  // Coordinates of the simplex vertices, unwrapped relative to the first vertex.
  std::vector<std::vector<Rational>> lifted(const std::vector<int>& simplex) const;
  std::vector<Rational> barycenter(const std::vector<int>& face) const;
  std::vector<std::vector<int>> faces(int i) const;  // distinct i-faces, lexicographic
  // Gram determinant of the edge vectors (squared volume times (dim!)^2).
  Rational gram_volume(const std::vector<int>& simplex) const;
  // Orthonormal basis (ambient x dim) of the simplex's affine hull.
  Matrix<double> tangent_basis(const std::vector<int>& simplex) const;
  Rational distance2(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
  std::vector<double> wrap(std::vector<double> x) const;
};

SimplicialComplex standard_simplex(int n);
SimplicialComplex regular_tetrahedron_boundary();
// Body-centred cubic tetrahedralization of the unit 3-torus on a G x G x G cube grid.
SimplicialComplex bcc_torus(int G);
SimplicialComplex point_set(const std::vector<std::vector<Rational>>& points);

SimplicialComplex barycentric_subdivide(const SimplicialComplex& K);

struct SamplePoint {
  std::vector<double> x;
  int simplex = 0;
};

// Low-discrepancy points on the realization, simplices weighted by volume.
std::vector<SamplePoint> sample_complex(const SimplicialComplex& K, int count, std::uint64_t offset = 0);

struct Ball {
  int family = 0;
  int index = 0;
  std::vector<int> face;
  std::vector<Rational> center;
  Rational radius;
  std::vector<double> dcenter;
  double dradius = 0.0;
  SmoothFn seed;  // b: bump(seed_lo r, seed_hi r) around the centre
  SmoothFn chi;   // bump(seed_hi r, r)
};

struct CoverageReport {
  bool covered = true;
  long points_checked = 0;
  long gaps = 0;
  int lattice_denominator = 0;
  std::vector<double> first_gap;
  int first_gap_simplex = -1;
  double worst_ratio = 0.0;  // max over points of min_ball |x - c| / r
  int subdivisions = 0;
  std::vector<std::string> notes;
};

struct CoverOptions {
  Rational c{Rational(999, 2000)};
  Rational seed_lo{Rational(197, 200)};
  Rational seed_hi{Rational(397, 400)};
  int density = 1000;     // lattice points per maximal simplex, at least
  int max_subdivisions = 1;
  bool stop_at_first_gap = false;
};

struct ChartMap {
  int n = 0;
  int ambient = 0;
  std::vector<Rational> center;
  Matrix<Rational> basis;  // ambient x n, orthonormal columns
  std::vector<bool> periodic;
  bool translation_only = true;

  std::vector<double> to_local(std::span<const double> x) const;
  std::vector<double> to_ambient(std::span<const double> y) const;
  Matrix<double> dbasis() const;
};

class NashCovering {
 public:
  SimplicialComplex complex;
  std::vector<std::vector<Ball>> families;
  CoverOptions options;
  CoverageReport coverage;

  int family_count() const { return static_cast<int>(families.size()); }
  size_t ball_count() const;
  const Ball& ball(int family, int index) const { return families[family][index]; }

  void build_index();
  // Balls whose closed radius-r disc may contain x.
  std::vector<const Ball*> candidates(std::span<const double> x) const;
  std::vector<const Ball*> candidates(std::span<const double> x, double reach) const;
  // Balls (any family) whose seed support meets the seed support of b.
  std::vector<const Ball*> seed_neighbours(const Ball& b) const;
  // Family-i ball containing x, or nullptr.
  const Ball* containing(int family, std::span<const double> x) const;
  double distance(std::span<const double> x, const Ball& b) const;

  double seed_sum(std::span<const double> x) const;
  std::vector<double> rho_values(std::span<const double> x) const;
  std::vector<double> chi_values(std::span<const double> x) const;

  SmoothFn rho(int family) const;            // global expression over all balls
  SmoothFn chi(int family) const;
  SmoothFn rho_local(const Ball& b) const;   // equal to rho on b
  ChartMap local_coordinates(const Ball& b) const;

 private:
  struct Index;
  std::shared_ptr<const Index> index_;
};

struct GapError : std::runtime_error {
  GapError(const std::string& what, std::vector<double> p) : std::runtime_error(what), point(std::move(p)) {}
  std::vector<double> point;
};

NashCovering nash_cover(const SimplicialComplex& K, const CoverOptions& options = {});
// Balls, seeds and cutoffs only; coverage is left uncertified.
NashCovering cover_balls(const SimplicialComplex& K, const CoverOptions& options = {});
CoverageReport certify_coverage(const NashCovering& cov, const CoverOptions& options);

struct PartitionCheck {
  long samples = 0;
  double max_sum_error = 0.0;
  double min_seed_sum = 0.0;
  bool rho_in_unit_interval = true;
  double max_chi_rho_defect = 0.0;   // max |chi_i rho_i - rho_i|
  bool rho_support_in_balls = true;
  bool chi_support_in_balls = true;
  std::vector<double> first_uncovered;
};

PartitionCheck check_partition(const NashCovering& cov, int samples, std::uint64_t offset = 0);

// Exact pairwise check |c_a - c_b|^2 > (r_a + r_b)^2 inside every family.
bool families_disjoint(const NashCovering& cov);

}  // namespace unispace
