#include <benchmark/benchmark.h>

#include <cmath>

#include "poolest/design_search.hpp"
#include "poolest/distributions.hpp"
#include "poolest/evaluation.hpp"
#include "poolest/montecarlo.hpp"

namespace {

using namespace poolest;

// Support length grows like c / theta, so small p is the expensive end.
void BM_TruncateSupport(benchmark::State& state) {
  const double p = 1.0 / static_cast<double>(state.range(0));
  const int k = 10;
  const double theta = 1.0 - std::pow(1.0 - p, k);
  const auto dist = OutcomeDistribution::make(OutcomeKind::NegBinPositives, 20, theta);
  for (auto _ : state) benchmark::DoNotOptimize(truncate_support(dist, 1e-6).bound);
}
BENCHMARK(BM_TruncateSupport)->Arg(10)->Arg(100)->Arg(1000);

void BM_EvaluateMle(benchmark::State& state) {
  const Model m = static_cast<Model>(state.range(0));
  const Design d = Design::make(m, 10, m == Model::A ? 25 : 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(Estimator::mle(m), d, 0.05).mse);
}
BENCHMARK(BM_EvaluateMle)
    ->Arg(static_cast<int>(Model::A))
    ->Arg(static_cast<int>(Model::B))
    ->Arg(static_cast<int>(Model::C));

void BM_EvaluateDegroot(benchmark::State& state) {
  const Design d = Design::make(Model::C, 30, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(Estimator::degroot(), d, 0.1).mse);
}
BENCHMARK(BM_EvaluateDegroot);

void BM_BestK(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_k(Estimator::burrows(Model::B), 0.1, Budget(25)).k_star);
  }
}
BENCHMARK(BM_BestK)->Unit(benchmark::kMillisecond);

void BM_OptimizePT(benchmark::State& state) {
  const Model m = state.range(0) == 0 ? Model::B : Model::C;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_pt(PTFamily::C, m, 10, 3, 0.1).achieved_mse);
  }
}
BENCHMARK(BM_OptimizePT)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const Design d = Design::make(Model::C, 10, 3);
  SimConfig cfg;
  cfg.replicates = state.range(0);
  cfg.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_estimator(Estimator::mle(Model::C), d, 0.1, cfg).emp_mse);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
