#include <benchmark/benchmark.h>

#include <random>

#include "corpus.hpp"
#include "deafs/efficiency.hpp"
#include "deafs/greedy.hpp"
#include "deafs/selection.hpp"

namespace {

void BM_AllEfficiencies(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int K = static_cast<int>(state.range(0));
  const deafs::Dataset d = deafs::testing::random_dataset(rng, K, 3, 8);
  const deafs::ActiveSet a = deafs::ActiveSet::all(d);
  for (auto _ : state) benchmark::DoNotOptimize(deafs::all_efficiencies(d, a));
  state.SetComplexityN(K);
}
BENCHMARK(BM_AllEfficiencies)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_GreedyNested(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const deafs::Dataset d = deafs::testing::random_dataset(rng, 20, 2, 10);
  for (auto _ : state) benchmark::DoNotOptimize(deafs::greedy_nested(d, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GreedyNested)->Arg(2)->Arg(5);

void BM_JointSelection(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const deafs::Dataset d = deafs::testing::random_dataset(rng, static_cast<int>(state.range(0)), 1, 8);
  deafs::SelectionConfig cfg;
  cfg.p = 3;
  for (auto _ : state) benchmark::DoNotOptimize(deafs::solve_selection(d, cfg, deafs::SelectionTarget::joint()));
}
BENCHMARK(BM_JointSelection)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_IndividualSelection(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const deafs::Dataset d = deafs::testing::random_dataset(rng, 30, 2, 12);
  deafs::SelectionConfig cfg;
  cfg.p = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(deafs::solve_selection(d, cfg, deafs::SelectionTarget::individual(0)));
  }
}
BENCHMARK(BM_IndividualSelection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
