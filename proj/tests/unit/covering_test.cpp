#include "testing.hpp"
#include "unispace/covering.hpp"

#include <gtest/gtest.h>

using namespace unispace;

TEST(Complex, Generators) {
  auto T = bcc_torus(3);
  EXPECT_EQ(T.vertices.size(), 54u);
  EXPECT_EQ(T.simplices.size(), 324u);
  EXPECT_NO_THROW(T.validate());
  auto S = regular_tetrahedron_boundary();
  EXPECT_EQ(S.dim, 2);
  EXPECT_EQ(S.simplices.size(), 4u);
  EXPECT_EQ(S.faces(1).size(), 6u);
  EXPECT_EQ(standard_simplex(4).faces(2).size(), 10u);
}

TEST(Complex, TorusFacesSatisfyEulerCharacteristicZero) {
  auto T = bcc_torus(3);
  long chi = 0;
  for (int i = 0; i <= 3; ++i) chi += (i % 2 ? -1 : 1) * static_cast<long>(T.faces(i).size());
  EXPECT_EQ(chi, 0);
}

TEST(Complex, ValidationRejectsBrokenInput) {
  SimplicialComplex K = standard_simplex(2);
  K.simplices.push_back({0, 1, 1});
  EXPECT_THROW(K.validate(), GeometryError);
  SimplicialComplex flat = standard_simplex(2);
  flat.vertices[2] = {Rational(2), Rational(0)};
  EXPECT_THROW(flat.validate(), GeometryError);
  EXPECT_THROW(bcc_torus(2), GeometryError);
}

TEST(Complex, BarycentricSubdivisionCounts) {
  auto S = barycentric_subdivide(standard_simplex(3));
  EXPECT_EQ(S.simplices.size(), 24u);
  EXPECT_EQ(S.vertices.size(), 15u);
  EXPECT_NO_THROW(S.validate());
}

TEST(Complex, SamplesLieOnTheirSimplex) {
  auto K = standard_simplex(3);
  for (const auto& p : sample_complex(K, 200)) {
    double s = 0;
    for (double v : p.x) {
      EXPECT_GE(v, -1e-15);
      s += v;
    }
    EXPECT_LE(s, 1 + 1e-12);
  }
}

class CoverFixture : public ::testing::TestWithParam<int> {};

TEST_P(CoverFixture, SimplexCovering) {
  const int n = GetParam();
  auto cov = nash_cover(standard_simplex(n));
  EXPECT_EQ(cov.family_count(), n + 1);
  EXPECT_TRUE(cov.coverage.covered);
  EXPECT_TRUE(families_disjoint(cov));
  auto pc = check_partition(cov, 1000);
  EXPECT_LT(pc.max_sum_error, 1e-10);
  EXPECT_TRUE(pc.rho_in_unit_interval);
  EXPECT_LT(pc.max_chi_rho_defect, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Dims, CoverFixture, ::testing::Values(1, 2, 3, 4));

TEST(Covering, PointIsOneBall) {
  auto cov = nash_cover(point_set({{Rational(1, 2), Rational(1, 3)}}));
  EXPECT_EQ(cov.family_count(), 1);
  EXPECT_EQ(cov.ball_count(), 1u);
}

TEST(Covering, RhoLocalMatchesGlobalPartition) {
  auto cov = nash_cover(regular_tetrahedron_boundary());
  for (const auto& sp : sample_complex(cov.complex, 200, 5)) {
    auto rho = cov.rho_values(sp.x);
    for (int i = 0; i < cov.family_count(); ++i) {
      const Ball* b = cov.containing(i, sp.x);
      if (!b) {
        EXPECT_EQ(rho[i], 0.0);
        continue;
      }
      EXPECT_NEAR(cov.rho_local(*b).eval(sp.x), rho[i], 1e-14);
    }
  }
}

TEST(Covering, DisjointnessIsDetected) {
  auto cov = nash_cover(standard_simplex(2));
  cov.families[1][0].radius = 10;
  cov.families[1][0].dradius = 10;
  EXPECT_FALSE(families_disjoint(cov));
}

TEST(Covering, ChartsAreIsometric) {
  auto cov = nash_cover(regular_tetrahedron_boundary());
  const Ball& b = cov.ball(2, 0);
  auto ch = cov.local_coordinates(b);
  std::vector<double> y = {0.01, -0.02};
  auto x = ch.to_ambient(y);
  auto back = ch.to_local(x);
  EXPECT_NEAR(back[0], y[0], 1e-12);
  EXPECT_NEAR(back[1], y[1], 1e-12);
}
