#include <benchmark/benchmark.h>

#include <vector>

#include "multest/fdp.hpp"
#include "multest/kfwer.hpp"
#include "multest/sim.hpp"
#include "multest/stepup.hpp"

namespace {

multest::PValueFamily make_family(std::size_t m, std::uint64_t seed) {
  multest::PhiloxStream rng(seed, 0);
  std::vector<double> p(m);
  for (auto& v : p) v = rng.next_uniform();
  return multest::PValueFamily(std::move(p));
}

void BM_PhiloxUniform(benchmark::State& state) {
  multest::PhiloxStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_uniform());
  }
}
BENCHMARK(BM_PhiloxUniform);

void BM_PhiloxNormal(benchmark::State& state) {
  multest::PhiloxStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_normal());
  }
}
BENCHMARK(BM_PhiloxNormal);

void BM_LinearStepUp(benchmark::State& state) {
  const auto p = make_family(state.range(0), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::linear_step_up(p, 0.1));
  }
}
BENCHMARK(BM_LinearStepUp)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Holm(benchmark::State& state) {
  const auto p = make_family(state.range(0), 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::holm(p, 0.1));
  }
}
BENCHMARK(BM_Holm)->Arg(100)->Arg(1000)->Arg(10000);

void BM_StepDownKfwer(benchmark::State& state) {
  const auto p = make_family(state.range(0), 13);
  const auto fam = multest::SubsetIndexedFamily::bonferroni(3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::step_down_kfwer(fam, 3, p));
  }
}
BENCHMARK(BM_StepDownKfwer)->Arg(50)->Arg(500);

void BM_QuantileThresholds(benchmark::State& state) {
  const multest::FdpParams params{0.1, 0.5,
                                  static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::q_thresholds(params));
  }
}
BENCHMARK(BM_QuantileThresholds)->Arg(50)->Arg(100)->Arg(200);

void BM_QuantileBinomial(benchmark::State& state) {
  const auto p = make_family(state.range(0), 14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::quantile_binomial(p, 0.1, 0.5));
  }
}
BENCHMARK(BM_QuantileBinomial)->Arg(50)->Arg(100);

void BM_GenGaussian(benchmark::State& state) {
  multest::GaussianModel model;
  model.m = state.range(0);
  model.m0 = model.m / 2;
  model.rho = 0.5;
  model.tau = 3.0;
  model.seed = 15;
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(multest::gen_gaussian(model, replicate++));
  }
}
BENCHMARK(BM_GenGaussian)->Arg(20)->Arg(100)->Arg(1000);

void BM_EstimateBhFdr(benchmark::State& state) {
  multest::GaussianModel model{20, 10, 0.0, 3.0, 16};
  const auto gen = multest::make_generator(model);
  const multest::Procedure bh = [](const multest::PValueFamily& p) {
    return multest::linear_step_up(p, 0.2);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        multest::estimate(bh, multest::Metric::fdr(), gen, 1000));
  }
}
BENCHMARK(BM_EstimateBhFdr);

}  // namespace

BENCHMARK_MAIN();
