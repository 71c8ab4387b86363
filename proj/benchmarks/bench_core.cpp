#include "ellab/functionals.hpp"
#include "ellab/geometry.hpp"
#include "ellab/kernels.hpp"
#include "ellab/report.hpp"
#include "ellab/solver.hpp"
#include "ellab/verifier.hpp"

#include <benchmark/benchmark.h>

using namespace ellab;

static void BM_SurfaceMean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ScalarField u = radial_oracle(n, 1.0);
  const SphereRule rule = SphereRule::for_dimension(n);
  for (auto _ : state) benchmark::DoNotOptimize(surface_mean(u, 0.7, rule, 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rule.size()));
}
BENCHMARK(BM_SurfaceMean)->Arg(2)->Arg(3);

static void BM_PicardSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const YukawaProblem prob = YukawaProblem::constant(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(picard_solve(prob).final_update);
}
BENCHMARK(BM_PicardSolve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_GridSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  YukawaProblem prob = YukawaProblem::constant(n, 1.0);
  prob.backend = Backend::FdGrid;
  for (auto _ : state) benchmark::DoNotOptimize(grid_solve(prob).final_update);
}
BENCHMARK(BM_GridSolve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SolutionEvaluation(benchmark::State& state) {
  const SolutionField sol = picard_solve(YukawaProblem::constant(3, 1.0));
  Point x(3);
  x << 0.3, -0.2, 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(sol.field(x));
}
BENCHMARK(BM_SolutionEvaluation);

static void BM_BlochNorm(benchmark::State& state) {
  const ScalarField u = radial_oracle(2, 1.0);
  const double nu = state.range(0) == 0 ? std::numeric_limits<double>::infinity() : 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(bloch_norm(u, nu, Majorant::identity(), {1.0, 0.0}).value);
}
BENCHMARK(BM_BlochNorm)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_QuasihyperbolicRaster(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const GridDomain disk = GridDomain::from_predicate([](const Point& p) { return p.norm() < 1.0; },
                                                     Point::Constant(2, -1.0), Point::Constant(2, 1.0), h);
  Point y(2);
  y << 0.6, 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(disk.quasihyperbolic(Point::Zero(2), y));
}
BENCHMARK(BM_QuasihyperbolicRaster)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_MeanValueCatalog(benchmark::State& state) {
  auto catalog = polynomial_catalog(2, 6);
  const auto c3 = polynomial_catalog(3, 6);
  catalog.insert(catalog.end(), c3.begin(), c3.end());
  for (auto _ : state) benchmark::DoNotOptimize(verify_mean_value(catalog, {0.25, 0.5, 0.9}).max_violation);
}
BENCHMARK(BM_MeanValueCatalog)->Unit(benchmark::kMillisecond);

static void BM_GrowthCheck(benchmark::State& state) {
  const ScalarField u = radial_oracle(3, 1.0);
  const auto grid = growth_radius_grid(20);
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_growth(u, 2.0, Majorant::identity(), {1.0, 0.0}, grid).max_violation);
}
BENCHMARK(BM_GrowthCheck)->Unit(benchmark::kMillisecond);

static void BM_DefaultReport(benchmark::State& state) {
  const RunConfig config = default_config();
  for (auto _ : state) benchmark::DoNotOptimize(run(config).items.size());
}
BENCHMARK(BM_DefaultReport)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
