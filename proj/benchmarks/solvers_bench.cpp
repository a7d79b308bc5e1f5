#include <benchmark/benchmark.h>

#include <memory>

#include "maid/cg.hpp"
#include "maid/fista.hpp"
#include "maid/hypergrad.hpp"
#include "maid/image.hpp"
#include "maid/maid.hpp"
#include "maid/problems/logistic.hpp"
#include "maid/problems/quadratic.hpp"
#include "maid/problems/tv_denoise.hpp"
#include "maid/random.hpp"

namespace {

using namespace maid;

const QuadraticBilevel& quadratic() {
  static const QuadraticBilevel problem = QuadraticBilevel::synthesize({.seed = 42});
  return problem;
}

std::shared_ptr<TVDenoise> tv_problem(int side) {
  const TvDataset data = synth_tv_dataset(side, side, 1, 0.1, 7);
  return std::make_shared<TVDenoise>(data.noisy, data.ground_truth);
}

ParamVector tv_theta() {
  ParamVector t(2);
  t << -2.5, -6.0;
  return t;
}

void BM_FistaQuadratic(benchmark::State& state) {
  const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  const ParamVector theta = ParamVector::Ones(10);
  std::int64_t units = 0;
  for (auto _ : state) {
    Budget budget;
    const LowerState s = fista_solve(quadratic(), theta, StateVector::Zero(10), eps, budget);
    benchmark::DoNotOptimize(s.x_tilde.data());
    units += s.iterations_used;
  }
  state.counters["units"] = benchmark::Counter(static_cast<double>(units), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_FistaQuadratic)->Arg(2)->Arg(5)->Arg(8);

void BM_CgQuadratic(benchmark::State& state) {
  const ParamVector theta = ParamVector::Ones(10);
  const StateVector x = quadratic().exact_lower_solution(theta);
  const StateVector rhs = quadratic().upper_grad(x);
  for (auto _ : state) {
    Budget budget;
    const CgResult r = cg_solve(quadratic(), theta, x, rhs, 1e-8, StateVector::Zero(10), budget);
    benchmark::DoNotOptimize(r.q.data());
  }
}
BENCHMARK(BM_CgQuadratic);

void BM_TvHessianProduct(benchmark::State& state) {
  const auto tv = tv_problem(static_cast<int>(state.range(0)));
  Rng rng(1);
  const StateVector v = standard_normal(tv->dims().n, rng);
  for (auto _ : state) {
    StateVector hv = tv->lower_hvp(tv->noisy(), tv_theta(), v);
    benchmark::DoNotOptimize(hv.data());
  }
  state.SetItemsProcessed(state.iterations() * tv->dims().n);
}
BENCHMARK(BM_TvHessianProduct)->Arg(32)->Arg(96)->Arg(256);

void BM_TvFista(benchmark::State& state) {
  const auto tv = tv_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Budget budget;
    const LowerState s = fista_solve(*tv, tv_theta(), tv->noisy(), 1e-4, budget);
    benchmark::DoNotOptimize(s.x_tilde.data());
  }
}
BENCHMARK(BM_TvFista)->Arg(32)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_LogisticGradient(benchmark::State& state) {
  const LogisticBilevel problem(synth_classification(500, 10, 3, 2.0, 3, 0),
                                synth_classification(200, 10, 3, 2.0, 3, 1));
  const ParamVector theta = ParamVector::Zero(30);
  Rng rng(2);
  const StateVector x = standard_normal(30, rng);
  for (auto _ : state) {
    StateVector g = problem.lower_grad(x, theta);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_LogisticGradient);

void BM_InexactGradientQuadratic(benchmark::State& state) {
  const ParamVector theta = ParamVector::Ones(10);
  for (auto _ : state) {
    LipschitzEstimates lips;
    Budget budget;
    SeedStreams seeds(5);
    const HypergradResult r = inexact_gradient(quadratic(), theta, 1e-3, 1e-3,
                                               {StateVector::Zero(10), StateVector::Zero(10)}, {}, lips,
                                               budget, seeds);
    benchmark::DoNotOptimize(r.z.data());
  }
}
BENCHMARK(BM_InexactGradientQuadratic);

// Whole MAID runs at a fixed budget; time per run is the comparable number.
void BM_MaidQuadratic(benchmark::State& state) {
  MaidConfig config;
  config.budget_cap = state.range(0);
  config.seed = 42;
  for (auto _ : state) {
    const MaidResult r = maid_run(quadratic(), ParamVector::Ones(10), config);
    benchmark::DoNotOptimize(r.theta.data());
  }
}
BENCHMARK(BM_MaidQuadratic)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_MaidTv(benchmark::State& state) {
  const TvDataset data = synth_tv_dataset(32, 32, 5, 0.1, 7);
  const TVDenoise tv(data.noisy, data.ground_truth);
  MaidConfig config;
  config.budget_cap = 2000;
  ParamVector theta0(2);
  theta0 << -5.0, -5.0;
  for (auto _ : state) {
    const MaidResult r = maid_run(tv, theta0, config);
    benchmark::DoNotOptimize(r.theta.data());
  }
}
BENCHMARK(BM_MaidTv)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
