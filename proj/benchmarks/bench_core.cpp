#include <benchmark/benchmark.h>

#include "wl1/basis.hpp"
#include "wl1/diagnostics.hpp"
#include "wl1/grid.hpp"
#include "wl1/sampling.hpp"
#include "wl1/solver.hpp"
#include "wl1/test_functions.hpp"

namespace {

wl1::PointSet legendre_points(wl1::Index n) {
  return wl1::PointSet::build(wl1::generate_points({wl1::GridKind::Equispaced, 1.0}, n, 1),
                              wl1::Basis::legendre());
}

void BM_MatrixAssembly(benchmark::State& state) {
  const wl1::Index n = state.range(0);
  const wl1::Basis basis = wl1::Basis::legendre();
  const wl1::PointSet ps = legendre_points(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wl1::SamplingMatrix::build(basis, ps, 4 * n));
  }
}
BENCHMARK(BM_MatrixAssembly)->Arg(20)->Arg(80)->Arg(320);

void BM_MinSingularValue(benchmark::State& state) {
  const wl1::Index n = state.range(0);
  const auto a = wl1::SamplingMatrix::build(wl1::Basis::legendre(), legendre_points(n), 4 * n);
  for (auto _ : state) benchmark::DoNotOptimize(wl1::min_singular_value(a.entries()));
}
BENCHMARK(BM_MinSingularValue)->Arg(20)->Arg(80)->Arg(160);

void BM_ComputeE(benchmark::State& state) {
  const wl1::Index n = state.range(0);
  const auto a = wl1::SamplingMatrix::build(wl1::Basis::legendre(), legendre_points(n), 16);
  for (auto _ : state) benchmark::DoNotOptimize(wl1::compute_E(a.entries(), 8));
}
BENCHMARK(BM_ComputeE)->Arg(129)->Arg(1025);

void BM_WeightedL1(benchmark::State& state) {
  const wl1::Index n = state.range(0);
  const wl1::Basis basis = wl1::Basis::legendre();
  const wl1::PointSet ps = legendre_points(n);
  const auto a = wl1::SamplingMatrix::build(basis, ps, 4 * n);
  const auto w = wl1::make_weights(basis, 4 * n, wl1::WeightScheme::PolyGamma, 1.0);
  const auto y = wl1::data_vector(ps, wl1::find_test_function("runge25").f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wl1::solve_weighted_l1(a.entries(), y, w.w, 0.0, wl1::ConstraintMode::Equality));
  }
}
BENCHMARK(BM_WeightedL1)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
