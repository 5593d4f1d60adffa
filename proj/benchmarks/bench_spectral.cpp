#include <benchmark/benchmark.h>

#include "brw/mean_dynamics.hpp"
#include "brw/spectral.hpp"

namespace {

void BM_CharPolyScaled(benchmark::State& state) {
  brw::IntervalRadius n(state.range(0));
  brw::BirthRate lambda(0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brw::char_poly_eval_scaled(n, lambda, 0.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CharPolyScaled)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

void BM_SpectralRadius(benchmark::State& state) {
  brw::IntervalRadius n(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brw::spectral_radius_c(n, 1e-14));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

void BM_CriticalLambda(benchmark::State& state) {
  brw::IntervalRadius n(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brw::critical_lambda(n));
  }
}
BENCHMARK(BM_CriticalLambda)->Arg(10)->Arg(1000)->Arg(10000);

void BM_MeanMatrix(benchmark::State& state) {
  brw::IntervalRadius n(state.range(0));
  brw::BirthRate lambda(0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brw::mean_matrix(n, lambda, 2.0));
  }
}
BENCHMARK(BM_MeanMatrix)->Arg(2)->Arg(16)->Arg(128);

}  // namespace
