#include <benchmark/benchmark.h>

#include "qpr/bench.hpp"
#include "qpr/linalg.hpp"
#include "qpr/pure.hpp"

namespace {

qpr::MeasurementEnsemble instance(std::size_t d, double ratio) {
  qpr::RngStream rng(17, d);
  return qpr::make_instance(d, ratio, rng);
}

void BM_Product(benchmark::State& state) {
  qpr::Quaternion p{0.3, -1.2, 0.7, 2.0};
  const qpr::Quaternion q{1.1, 0.4, -0.5, 0.9};
  for (auto _ : state) {
    p = p * q;
    p = p * (1.0 / qpr::abs(p));
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Product);

void BM_GradQraf(benchmark::State& state) {
  const auto ens = instance(static_cast<std::size_t>(state.range(0)), 9.0);
  const qpr::QVector z = *ens.x_true;
  for (auto _ : state) benchmark::DoNotOptimize(qpr::grad_qraf(ens, z, 5.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ens.n() * ens.d()));
}
BENCHMARK(BM_GradQraf)->Arg(64)->Arg(100)->Arg(256);

void BM_PowerIteration(benchmark::State& state) {
  const auto ens = instance(static_cast<std::size_t>(state.range(0)), 9.0);
  const auto s = qpr::weighted_max_corr_matrix(ens, qpr::InitConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(qpr::power_leading(s));
}
BENCHMARK(BM_PowerIteration)->Arg(64)->Arg(100);

void BM_InitWeightedMaxCorr(benchmark::State& state) {
  const auto ens = instance(static_cast<std::size_t>(state.range(0)), 9.0);
  for (auto _ : state) benchmark::DoNotOptimize(qpr::init_weighted_max_corr(ens, qpr::InitConfig{}));
}
BENCHMARK(BM_InitWeightedMaxCorr)->Arg(64)->Arg(100);

void BM_Qpfe(benchmark::State& state) {
  qpr::RngStream rng(3, 0);
  qpr::QVector z(static_cast<std::size_t>(state.range(0)));
  for (auto& q : z) q = qpr::sample_quaternion_gaussian(rng);
  for (auto _ : state) benchmark::DoNotOptimize(qpr::qpfe(z));
}
BENCHMARK(BM_Qpfe)->Arg(64)->Arg(256);

void BM_Solve(benchmark::State& state) {
  const auto algo = static_cast<qpr::Algorithm>(state.range(0));
  const auto ens = instance(64, 9.0);
  const auto cfg = qpr::SolverConfig::defaults(algo);
  for (auto _ : state) benchmark::DoNotOptimize(qpr::solve(ens, cfg, qpr::RngStream(5, 0)));
  state.SetLabel(std::string(qpr::to_string(algo)));
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<int>(qpr::Algorithm::qraf))
    ->Arg(static_cast<int>(qpr::Algorithm::qiraf))
    ->Arg(static_cast<int>(qpr::Algorithm::qaraf))
    ->Arg(static_cast<int>(qpr::Algorithm::qadraf))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
