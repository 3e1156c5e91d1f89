#include <benchmark/benchmark.h>

#include "ctm/agents.hpp"
#include "ctm/bic.hpp"
#include "ctm/model_io.hpp"
#include "ctm/montecarlo.hpp"

namespace {

const ctm::ContextTreeModel& model3() {
  static const ctm::ContextTreeModel m = ctm::preset_model("model3");
  return m;
}

std::shared_ptr<const ctm::ContextTreeModel> shared_model3() {
  static const auto m = std::make_shared<const ctm::ContextTreeModel>(ctm::preset_model("model3"));
  return m;
}

void BM_StrategyScoresSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ctm::strategy_score_samples_serial(model3(), 250, 2000, 1));
}

void BM_StrategyScoresParallel(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ctm::strategy_score_samples(model3(), 250, 2000, 1, threads));
}

void BM_RejectionRateSerial(benchmark::State& state) {
  const auto agent = ctm::parse_agent_spec("self:rho=0.5", shared_model3());
  for (auto _ : state) benchmark::DoNotOptimize(ctm::lr_rejection_rate_serial(model3(), agent, 1000, 1, 1, 0.05, 100, 1));
}

void BM_RejectionRateParallel(benchmark::State& state) {
  const auto agent = ctm::parse_agent_spec("self:rho=0.5", shared_model3());
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ctm::lr_rejection_rate(model3(), agent, 1000, 1, 1, 0.05, 100, 1, threads));
}

void BM_RecoverySerial(benchmark::State& state) {
  const auto agent = ctm::parse_agent_spec("matching", shared_model3());
  const auto grid = ctm::default_penalty_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(ctm::planted_recovery_serial(model3(), agent, model3().tree(), 1000, 4, grid, 20, 1));
}

void BM_RecoveryParallel(benchmark::State& state) {
  const auto agent = ctm::parse_agent_spec("matching", shared_model3());
  const auto grid = ctm::default_penalty_grid();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ctm::planted_recovery(model3(), agent, model3().tree(), 1000, 4, grid, 20, 1, threads));
}

}  // namespace

BENCHMARK(BM_StrategyScoresSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StrategyScoresParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RejectionRateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RejectionRateParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RecoverySerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RecoveryParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
