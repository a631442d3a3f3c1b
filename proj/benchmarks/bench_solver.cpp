#include <benchmark/benchmark.h>

#include "sso/objectives.hpp"
#include "sso/problems.hpp"
#include "sso/solver.hpp"

using namespace sso;

namespace {

// Full solver iterations on planted instances; the per-iteration cost
// should scale roughly linearly in n at fixed p.
void BM_PlantedNpcaIterations(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = 100;
  const int p = 10;
  PlantedNpca inst = gen_planted_npca(n, m, p, 11);
  NpcaObjective obj(inst.a, p);
  SupportMatrix x0 = gen_random_feasible(n, p, 12);

  SolverOptions opts;
  opts.tol = 0.0;
  opts.max_iters = 20;

  for (auto _ : state) {
    SolveResult res = solve(obj, x0, opts);
    benchmark::DoNotOptimize(res.f_final);
    state.counters["iters"] = res.iterations;
  }
  state.SetItemsProcessed(state.iterations() * opts.max_iters);
}
BENCHMARK(BM_PlantedNpcaIterations)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SpectralInit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PlantedNpca inst = gen_planted_npca(n, 60, 5, 21);
  // Gram matrix of the data as the symmetric input.
  DenseMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int r = 0; r < 60; ++r) s += inst.a(r, i) * inst.a(r, j);
      g(i, j) = s;
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_init(g, 5));
  }
}
BENCHMARK(BM_SpectralInit)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
