#include <benchmark/benchmark.h>

#include <memory>

#include "prsplit/engine.hpp"
#include "prsplit/experiments.hpp"
#include "prsplit/lasso.hpp"

namespace {

using namespace prsplit;

const LassoInstance& instance200() {
  static const LassoInstance inst =
      LassoInstance::generate({300, 200, BMode::kGaussian, 1});
  return inst;
}

void BM_generate_instance(benchmark::State& state) {
  const auto size = static_cast<Eigen::Index>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        LassoInstance::generate({size, size, BMode::kZero, seed++}));
  }
}
BENCHMARK(BM_generate_instance)->Arg(200)->Arg(400);

void BM_resolvent_quadratic(benchmark::State& state) {
  const auto& inst = instance200();
  Vector x = Vector::Ones(inst.n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(inst.resolvent_a(x));
  }
}
BENCHMARK(BM_resolvent_quadratic);

void BM_resolvent_threshold(benchmark::State& state) {
  const auto& inst = instance200();
  Vector x = Vector::Ones(inst.n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(inst.resolvent_b(x));
  }
}
BENCHMARK(BM_resolvent_threshold);

void BM_step(benchmark::State& state) {
  auto inst = std::make_shared<const LassoInstance>(instance200());
  const ProblemPair pair = make_problem_pair(inst);
  RunConfig config;
  config.theta = theta_mid(inst->beta());
  Vector x = Vector::Ones(inst->n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(pair, config, x));
  }
}
BENCHMARK(BM_step);

void BM_run_to_convergence(benchmark::State& state) {
  auto inst = std::make_shared<const LassoInstance>(instance200());
  const ProblemPair pair = make_problem_pair(inst);
  RunConfig config;
  config.theta = theta_mid(inst->beta());
  const Vector x0 = Vector::Ones(inst->n());
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(pair, config, x0));
  }
}
BENCHMARK(BM_run_to_convergence);

void BM_spectral_bounds(benchmark::State& state) {
  const auto& inst = instance200();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigen_bounds(inst.c()));
  }
}
BENCHMARK(BM_spectral_bounds);

}  // namespace

BENCHMARK_MAIN();
