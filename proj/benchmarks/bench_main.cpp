#include "nlpot/garding.hpp"
#include "nlpot/ops.hpp"
#include "nlpot/riesz.hpp"
#include "nlpot/solver.hpp"

#include <benchmark/benchmark.h>

using namespace nlpot;

static void BM_SymmetricEigenvalues(benchmark::State& state) {
  Rng rng = sample_rng(1, 0);
  Matrix m = random_symmetric(rng, int(state.range(0))).matrix();
  // a fresh SymMatrix each time; eigenvalues are memoized per object
  for (auto _ : state) benchmark::DoNotOptimize(SymMatrix(m).eigenvalues().front());
}
BENCHMARK(BM_SymmetricEigenvalues)->Arg(2)->Arg(3)->Arg(6);

static void BM_DualMembership(benchmark::State& state) {
  Subequation F = make_subequation("Sigma_k", {{"n", 4}, {"k", 2}});
  Rng rng = sample_rng(2, 0);
  Jet2 j(random_symmetric(rng, 4));
  for (auto _ : state) benchmark::DoNotOptimize(dual_contains(F, j));
}
BENCHMARK(BM_DualMembership);

static void BM_GardingEigenvalues(benchmark::State& state) {
  GardingPolynomial f = make_garding("p_fold", {{"n", 4}, {"p", 2}});
  Rng rng = sample_rng(3, 0);
  SymMatrix a = random_symmetric(rng, 4);
  for (auto _ : state) benchmark::DoNotOptimize(garding_eigenvalues(f, a));
}
BENCHMARK(BM_GardingEigenvalues);

static void BM_CanonicalOperator(benchmark::State& state) {
  OperatorPair p = canonical_operator(make_subequation("P_pucci", {{"n", 3}, {"lambda", 1}, {"Lambda", 2}}), 1.0);
  Rng rng = sample_rng(4, 0);
  SymMatrix a = random_symmetric(rng, 3);
  for (auto _ : state) benchmark::DoNotOptimize(p(a));
}
BENCHMARK(BM_CanonicalOperator);

static void BM_RieszCharacteristic(benchmark::State& state) {
  Subequation F = make_subequation("Sigma_k", {{"n", 6}, {"k", 3}});
  for (auto _ : state) benchmark::DoNotOptimize(riesz_characteristic(F));
}
BENCHMARK(BM_RieszCharacteristic);

static void BM_SolveQuadratic(benchmark::State& state) {
  SolveConfig c;
  c.domain = Domain::rectangle(0, 1, 0, 1);
  c.grid = int(state.range(0));
  c.directions = 16;
  c.psi = [](double, double) { return 1.0; };
  c.initial = [](double, double) { return 0.0; };
  for (auto _ : state) benchmark::DoNotOptimize(solve(c).report.iterations);
}
BENCHMARK(BM_SolveQuadratic)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
