#include <benchmark/benchmark.h>

#include "brw/genealogy.hpp"
#include "brw/simulation.hpp"

namespace {

void BM_RestrictedTrajectory(benchmark::State& state) {
  brw::SimParams p;
  p.lambda = brw::BirthRate(0.6);
  p.n = brw::IntervalRadius(state.range(0));
  p.initial = brw::Configuration::single(0);
  p.t_max = 50.0;
  std::uint64_t i = 0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    brw::Engine rng = brw::trial_engine(7, i++);
    events += brw::run_trajectory(p, rng).outcome.events_used;
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RestrictedTrajectory)->Arg(2)->Arg(10);

void BM_SurvivalEstimate(benchmark::State& state) {
  brw::SimParams p;
  p.lambda = brw::BirthRate(0.6);
  p.n = brw::IntervalRadius(2);
  p.initial = brw::Configuration::single(0);
  p.t_max = 20.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(brw::estimate_survival(p, 1000, 1));
  }
}
BENCHMARK(BM_SurvivalEstimate);

void BM_GenealogyAndCouplings(benchmark::State& state) {
  brw::SimParams p;
  p.lambda = brw::BirthRate(0.65);
  p.initial = brw::Configuration::single(0);
  p.t_max = 5.0;
  std::uint64_t i = 0;
  for (auto _ : state) {
    brw::Engine rng = brw::trial_engine(11, i++);
    brw::Genealogy g = brw::build_genealogy(p, rng);
    auto thin = brw::thinned_membership(g, 0.55);
    benchmark::DoNotOptimize(brw::check_domination(g, thin, brw::full_membership(g)));
  }
}
BENCHMARK(BM_GenealogyAndCouplings);

}  // namespace
