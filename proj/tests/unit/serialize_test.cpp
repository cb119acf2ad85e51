#include "testing.hpp"
#include "unispace/io.hpp"

#include <gtest/gtest.h>

using namespace unispace;
using namespace unispace::testing;

TEST(Json, RationalsStayExact) {
  for (Rational q : {Rational(1, 3), Rational(-7), Rational(3, 8), Rational(22, 7)}) {
    EXPECT_EQ(io::rational_from_json(io::to_json(q)), q);
  }
  EXPECT_TRUE(io::to_json(Rational(3, 8)).is_number());
  EXPECT_TRUE(io::to_json(Rational(1, 3)).is_string());
}

TEST(Json, FormRoundTrip) {
  std::mt19937_64 rng(71);
  auto a = random_form(rng, 3, 2);
  a.add({0, 2}, SmoothFn::parse("sin(2*pi*x1)*bump(1/4,1/2,0,0,0)", 3));
  auto b = io::form_from_json(io::to_json(a));
  EXPECT_EQ(io::to_json(a).dump(), io::to_json(b).dump());
}

TEST(Json, ComplexRoundTrip) {
  auto K = bcc_torus(3);
  auto L = io::complex_from_json(io::to_json(K));
  EXPECT_EQ(L.vertices, K.vertices);
  EXPECT_EQ(L.simplices, K.simplices);
  EXPECT_EQ(L.periodic, K.periodic);
}

TEST(Json, MalformedInputIsReported) {
  EXPECT_THROW(io::form_from_json({{"degree", 1}}), io::FormatError);
  io::json bad = {{"chart_dim", 2}, {"degree", 1}, {"coeffs", {{"1", "x3"}}}};
  EXPECT_THROW(io::form_from_json(bad), io::FormatError);
}

TEST(Json, ImmersionRoundTripReproducesVerdict) {
  DifferentialForm phi(3, 2);
  phi.set({1, 2}, SmoothFn::parse("cos(x1)*x2", 3));
  auto A = assemble(nash_cover(standard_simplex(3)), phi);
  auto B = io::immersion_from_json(io::to_json(A));
  auto C = io::immersion_from_json(io::to_json(B));
  EXPECT_EQ(io::to_json(B).dump(), io::to_json(C).dump());
  auto w = exterior_d(phi);
  auto ra = verify(A, w, 300), rb = verify(B, w, 300);
  EXPECT_EQ(io::to_json(rb).dump(), io::to_json(verify(C, w, 300)).dump());
  EXPECT_EQ(ra.pass, rb.pass);
  EXPECT_NEAR(ra.max_residual, rb.max_residual, 1e-12);
  EXPECT_EQ(ra.min_rank, rb.min_rank);
}

TEST(Json, CorruptedImmersionFailsVerification) {
  DifferentialForm phi(3, 2);
  phi.set({1, 2}, SmoothFn::parse("cos(x1)*x2", 3));
  auto A = assemble(nash_cover(standard_simplex(3)), phi);
  auto j = io::to_json(A);
  for (auto& fam : j["pieces"])
    for (auto& p : fam) p["lambda"][2] = "0";
  auto B = io::immersion_from_json(j);
  EXPECT_FALSE(verify(B, exterior_d(phi), 300).pass);
}
