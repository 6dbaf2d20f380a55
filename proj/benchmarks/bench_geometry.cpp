#include "finsler/catalog.hpp"
#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/jets.hpp"
#include "finsler/tensors.hpp"

#include <benchmark/benchmark.h>

#include <array>

namespace {

using namespace finsler;

struct Point {
  Lagrangian L;
  Vec x;
  Vec v;
};

Point finsler_point() {
  Point p{build_sample_parallel_example(), Vec(4), Vec(4)};
  p.x << 0.1, 0.2, -0.1, 0.3;
  p.v = p.L.cone_ref(p.x);
  return p;
}

void BM_FiberHessianJet(benchmark::State& state) {
  const Point p = finsler_point();
  const std::array<Vec, 2> dirs{unit_vector(4, 1), unit_vector(4, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(mixed_derivative(p.L, p.x, p.v, {}, dirs));
}
BENCHMARK(BM_FiberHessianJet);

void BM_FundamentalMatrix(benchmark::State& state) {
  const Point p = finsler_point();
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_matrix(p.L, p.x, p.v));
}
BENCHMARK(BM_FundamentalMatrix);

void BM_Christoffel(benchmark::State& state) {
  const Point p = finsler_point();
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(p.L, p.x, p.v));
}
BENCHMARK(BM_Christoffel);

void BM_ChristoffelQuadratic(benchmark::State& state) {
  const Lagrangian L = build_brinkmann_quadratic(WaveProfile::named("uxy"));
  Vec x(4);
  x << 0.1, 0.2, -0.1, 0.3;
  const Vec v = L.cone_ref(x);
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(L, x, v));
}
BENCHMARK(BM_ChristoffelQuadratic);

void BM_ChernCurvature(benchmark::State& state) {
  const Point p = finsler_point();
  for (auto _ : state) benchmark::DoNotOptimize(chern_curvature(p.L, p.x, p.v));
}
BENCHMARK(BM_ChernCurvature)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
