#include <benchmark/benchmark.h>

#include "subtr/bfgs.hpp"
#include "subtr/sampling.hpp"
#include "subtr/solver.hpp"
#include "subtr/subproblem.hpp"

#include <numeric>
#include <random>

using namespace subtr;

namespace {

Matrix random_spd(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a.transpose() * a + 1e-3 * Matrix::Identity(n, n);
}

void BM_Dogleg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  ModelSpec m;
  m.B = random_spd(n, rng);
  m.g = Vector(n);
  for (int i = 0; i < n; ++i) m.g[i] = g(rng);
  m.delta = 0.5;
  m.f0 = 0.0;
  for (auto _ : state) {
    auto step = dogleg(m);
    benchmark::DoNotOptimize(step);
  }
}

void BM_BfgsUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  BfgsState bfgs(n);
  Vector s(n), y(n);
  for (auto _ : state) {
    for (int i = 0; i < n; ++i) s[i] = g(rng);
    y = s + 0.1 * Vector::Random(n);
    bfgs_update(bfgs, s, y);
    benchmark::DoNotOptimize(bfgs.B);
  }
}

void BM_SampleGradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto p = make_trig_problem(d);
  Vector x = Vector::Ones(d) * 0.7;
  SampleSet set;
  set.indices.resize(d / 2);
  std::iota(set.indices.begin(), set.indices.end(), 1);
  set.fraction_h = 0.5;
  for (auto _ : state) {
    EvaluationLedger ledger;
    Vector grad = sample_gradient(p, set, x, ledger);
    benchmark::DoNotOptimize(grad);
  }
}

void BM_SolveFirstOrder(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto p = make_trig_problem(d);
  Vector x0 = Vector::Ones(d);
  SolverParams ps;
  ps.algorithm = Algorithm::kSubsampledFirstOrder;
  for (auto _ : state) {
    auto r = run_first_order(p, x0, ps);
    benchmark::DoNotOptimize(r.cost);
  }
}

BENCHMARK(BM_Dogleg)->Arg(10)->Arg(100)->Arg(500);
BENCHMARK(BM_BfgsUpdate)->Arg(100)->Arg(500);
BENCHMARK(BM_SampleGradient)->Arg(100)->Arg(1000);
BENCHMARK(BM_SolveFirstOrder)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
