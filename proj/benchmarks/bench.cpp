#include "unispace/forms.hpp"
#include "unispace/immersion.hpp"
#include "unispace/linalg.hpp"
#include "unispace/regularity.hpp"

#include <benchmark/benchmark.h>

using namespace unispace;

static void BM_ExactRankStaircase(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  Staircase s = staircase_embedding(l, 3, false);
  auto M = contraction_matrix(standard_beta<Rational>(s.delta, 3), s.map);
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank(M));
  state.counters["rows"] = M.rows;
  state.counters["cols"] = M.cols;
}
BENCHMARK(BM_ExactRankStaircase)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

static void BM_StaircaseCertified(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0)), l = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(staircase_embedding(l, k, true));
}
BENCHMARK(BM_StaircaseCertified)->Args({3, 9})->Args({4, 10})->Args({5, 11})->Unit(benchmark::kMillisecond);

static void BM_SymbolicPullback(benchmark::State& state) {
  DifferentialForm phi(4, 2);
  phi.set({0, 1}, SmoothFn::parse("x3*x4 + x1^2", 4));
  phi.set({2, 3}, SmoothFn::parse("x1*x2*x3", 4));
  auto f = local_immersion(phi);
  auto gamma = gamma_form(static_cast<int>(f.blocks.size()), 3);
  for (auto _ : state) benchmark::DoNotOptimize(pullback(f.map, gamma));
}
BENCHMARK(BM_SymbolicPullback)->Unit(benchmark::kMillisecond);

static void BM_PoincarePrimitive(benchmark::State& state) {
  DifferentialForm eta(5, 2);
  eta.set({0, 1}, SmoothFn::parse("x3^2*x5 - x4", 5));
  eta.set({2, 4}, SmoothFn::parse("x1*x2^3", 5));
  auto w = exterior_d(eta);
  for (auto _ : state) benchmark::DoNotOptimize(poincare_primitive(w));
}
BENCHMARK(BM_PoincarePrimitive)->Unit(benchmark::kMillisecond);

static void BM_NashCoverTorus(benchmark::State& state) {
  auto K = bcc_torus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nash_cover(K));
}
BENCHMARK(BM_NashCoverTorus)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_TorusImmersionEval(benchmark::State& state) {
  DifferentialForm phi(3, 2);
  phi.set({1, 2}, SmoothFn::parse("-cos(2*pi*x1)/(2*pi)", 3));
  auto A = assemble(nash_cover(bcc_torus(3)), phi, {100, 0});
  std::vector<double> x = {0.31, 0.77, 0.12}, f;
  Matrix<double> J;
  for (auto _ : state) {
    A.eval(x, f, &J);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_TorusImmersionEval)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
