#include <benchmark/benchmark.h>

#include "monosplit/problems.hpp"
#include "monosplit/solver.hpp"

namespace {

using namespace monosplit;

SolverConfig base_config(Eigen::Index dim, double lambda, int iters) {
  SolverConfig cfg;
  cfg.x0 = Vector::Ones(dim);
  cfg.step = StepPlan::constant_step(lambda);
  cfg.max_iters = iters;
  cfg.residual_tol = 0.0;
  return cfg;
}

void BM_ForbRotation(benchmark::State& state) {
  ProblemInstance p = make_rotation(static_cast<int>(state.range(0)));
  SolverConfig cfg = base_config(p.inclusion.dim(), 0.4, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_forb(p.inclusion, cfg));
  }
}
BENCHMARK(BM_ForbRotation)->Arg(4)->Arg(64);

void BM_TsengRotation(benchmark::State& state) {
  ProblemInstance p = make_rotation(static_cast<int>(state.range(0)));
  SolverConfig cfg = base_config(p.inclusion.dim(), 0.4, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_baseline(BaselineAlg::tseng, p.inclusion, cfg));
  }
}
BENCHMARK(BM_TsengRotation)->Arg(4)->Arg(64);

void BM_ForbCompositeMin(benchmark::State& state) {
  ProblemInstance p = make_composite_min(3, 10, 20, 0.1);
  double lam = 0.9 / (2.0 * *p.inclusion.constants.L);
  SolverConfig cfg = base_config(p.inclusion.dim(), lam, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_forb(p.inclusion, cfg));
  }
}
BENCHMARK(BM_ForbCompositeMin);

void BM_ForbLinesearchCompositeMin(benchmark::State& state) {
  ProblemInstance p = make_composite_min(3, 10, 20, 0.1);
  SolverConfig cfg = base_config(p.inclusion.dim(), 0.1, 200);
  LinesearchParams ls;
  ls.lambda0 = 1.0;
  cfg.step = StepPlan::backtracking(ls);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_forb_linesearch(p.inclusion, cfg));
  }
}
BENCHMARK(BM_ForbLinesearchCompositeMin);

}  // namespace

BENCHMARK_MAIN();
