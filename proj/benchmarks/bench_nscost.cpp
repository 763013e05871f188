#include <benchmark/benchmark.h>

#include "../tests/support/random_problems.hpp"
#include "nscost/programs.hpp"
#include "nscost/random.hpp"
#include "nscost/symmetry.hpp"

namespace {

using namespace nscost;

void BM_SolveRandomProblem(benchmark::State& state) {
  std::mt19937_64 rng(42);
  testing::RandomProblemOptions opt;
  opt.max_sdp_size = static_cast<int>(state.range(0));
  opt.max_sdp_blocks = 2;
  const auto problem = testing::random_feasible_problem(rng, opt);
  conic::SolverOptions so;
  so.keep_history = false;
  for (auto _ : state) benchmark::DoNotOptimize(conic::solve(problem, so).primal_value);
}
BENCHMARK(BM_SolveRandomProblem)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ZeroErrorCost(benchmark::State& state) {
  const QuantumChannel ch = depolarizing(static_cast<int>(state.range(0)), 0.15);
  for (auto _ : state) benchmark::DoNotOptimize(zero_error_cost(ch).cost.tr_v_opt);
}
BENCHMARK(BM_ZeroErrorCost)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DiamondNorm(benchmark::State& state) {
  Rng rng(1);
  const int d = static_cast<int>(state.range(0));
  const QuantumChannel a = random_channel(d, d, rng), b = random_channel(d, d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_norm_dist(a, b));
}
BENCHMARK(BM_DiamondNorm)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_OneShotCost(benchmark::State& state) {
  const QuantumChannel one = depolarizing(2, 0.15);
  const QuantumChannel ch = state.range(0) == 1 ? one : tensor(one, one);
  for (auto _ : state) benchmark::DoNotOptimize(one_shot_cost_ns(ch, 5e-2).tr_v_opt);
}
BENCHMARK(BM_OneShotCost)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DepolarizingLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(depolarizing_cost_lp(n, 2, 0.15, 5e-2).unceiled_per_use);
}
BENCHMARK(BM_DepolarizingLp)->Arg(10)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
