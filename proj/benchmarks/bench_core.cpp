#include <benchmark/benchmark.h>

#include <cmath>

#include "bdlab/functional.hpp"
#include "bdlab/measure.hpp"
#include "bdlab/quasiconvexity.hpp"
#include "bdlab/rigidity2d.hpp"
#include "bdlab/young_measure.hpp"

using namespace bdlab;

namespace {

DisplacementField staircase(int n) {
  const Grid g = Grid::cube(2, -1.0, 1.0, n);
  std::vector<JumpInterface> jumps{JumpInterface::polyline({{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 0.0}),
                                   JumpInterface::polyline({{0.0, -1.0}, {0.0, 1.0}}, {0.0, 1.0})};
  return sample_field(
      g, [](std::span<const double> x) { return Vec{x[1] > 0 ? 1.0 : 0.0, x[0] > 0 ? 1.0 : 0.0}; }, jumps);
}

DisplacementField smooth(int n) {
  return sample_field(Grid::cube(2, 0.0, 1.0, n), [](std::span<const double> x) {
    return Vec{std::exp(x[0]) * std::sin(x[1]), -std::exp(x[0]) * std::cos(x[1])};
  });
}

FunctionalOptions no_boundary() {
  FunctionalOptions o;
  o.include_boundary = false;
  return o;
}

}  // namespace

static void BM_ClassifyDyad(benchmark::State& state) {
  const SymMatrix m = SymMatrix::from_rows({{0.3, 1.2}, {1.2, -0.7}});
  for (auto _ : state) benchmark::DoNotOptimize(classify_dyad(m));
}
BENCHMARK(BM_ClassifyDyad);

static void BM_SymGradient(benchmark::State& state) {
  const auto u = smooth(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sym_gradient(u));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_SymGradient)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oN);

static void BM_AssembleMeasure(benchmark::State& state) {
  const auto u = staircase(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_symmetrized_measure(u));
}
BENCHMARK(BM_AssembleMeasure)->Arg(33)->Arg(65)->Arg(129)->Arg(257);

static void BM_EvaluateFunctional(benchmark::State& state) {
  const auto u = staircase(static_cast<int>(state.range(0)));
  const Integrand f = catalog::area();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_functional(f, u, no_boundary()));
}
BENCHMARK(BM_EvaluateFunctional)->Arg(33)->Arg(65)->Arg(129)->Arg(257);

static void BM_Mollify(benchmark::State& state) {
  const auto u = staircase(201);
  for (auto _ : state) benchmark::DoNotOptimize(mollify(u, 0.1));
}
BENCHMARK(BM_Mollify)->Unit(benchmark::kMillisecond);

static void BM_SolveElliptic(benchmark::State& state) {
  const Grid g = Grid::cube(2, 0.0, 1.0, static_cast<int>(state.range(0)));
  std::vector<double> gv(g.node_count());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    gv[n] = std::exp(x[0]) * std::sin(x[1]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_elliptic(SymMatrix::identity(2), g, gv));
}
BENCHMARK(BM_SolveElliptic)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_CellProblem(benchmark::State& state) {
  const Grid cell = Grid::cube(2, 0.0, 1.0, static_cast<int>(state.range(0)));
  CellProblemOptions opts;
  opts.iters = 50;
  opts.restarts = 1;
  const Integrand f = catalog::norm();
  const SymMatrix A = SymMatrix::from_rows({{0.4, 0.1}, {0.1, -0.2}});
  for (auto _ : state) benchmark::DoNotOptimize(cell_problem_min(f, A, cell, opts));
}
BENCHMARK(BM_CellProblem)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_ElementaryYoungMeasure(benchmark::State& state) {
  const auto mu = assemble_symmetrized_measure(staircase(129));
  const Integrand f = catalog::norm();
  for (auto _ : state) {
    const YoungMeasure nu = elementary_ym(mu);
    benchmark::DoNotOptimize(pair_duality(f, nu));
  }
}
BENCHMARK(BM_ElementaryYoungMeasure)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
