#include <benchmark/benchmark.h>

#include "sso/problems.hpp"
#include "sso/rng.hpp"
#include "sso/solver.hpp"
#include "sso/subproblem.hpp"

using namespace sso;

namespace {

DenseMatrix random_gradient(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix g(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
  }
  return g;
}

void BM_FixedSupportSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 10;
  SupportMatrix z = gen_random_feasible(n, p, 1);
  ProxData pd(z, random_gradient(n, p, 2), 1.0);
  SignPattern s = SignPattern::of(z);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed_support(pd, s));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FixedSupportSolve)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_RelocationSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 10;
  SupportMatrix y = gen_random_feasible(n, p, 3);
  DenseMatrix g = random_gradient(n, p, 4);
  LinearObjective obj(g);
  const double f_y = obj.value(y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relocation_step(obj, y, f_y, g, 1.0, 0.1));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RelocationSweep)->Arg(1000)->Arg(10000);

void BM_ColumnStateMove(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = 10;
  SupportMatrix z = gen_random_feasible(n, p, 5);
  ProxData pd(z, random_gradient(n, p, 6), 1.0);
  ColumnState cs = build_column_state(pd, SignPattern::of(z));
  Rng rng(7);
  for (auto _ : state) {
    const int row = rng.uniform_int(n);
    const int from = cs.column_of(row);
    const int to = rng.uniform_int(p);
    if (to != from && cs.members(from).size() == 1) continue;
    benchmark::DoNotOptimize(cs.move_row(row, from, to));
  }
}
BENCHMARK(BM_ColumnStateMove)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
