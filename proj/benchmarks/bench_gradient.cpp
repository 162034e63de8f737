#include <benchmark/benchmark.h>

#include <random>

#include "sos/unitary_compression.hpp"

namespace {

sos::CoeffTensor4 random_tensor(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  sos::CoeffTensor4 t(n, sos::Convention::ChargeCharge);
  for (Eigen::Index i = 0; i < t.data().size(); ++i) t.data()[i] = {g(rng), g(rng)};
  return t;
}

sos::KappaParams random_kappa(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.3);
  sos::KappaParams k = sos::KappaParams::zero(n);
  for (Eigen::Index i = 0; i < k.params.size(); ++i) k.params[i] = g(rng);
  return k;
}

void BM_ChainRuleGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n);
  const sos::CoeffTensor4 t = random_tensor(n, rng);
  const sos::KappaParams k = random_kappa(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sos::gradient(t, k));
}
BENCHMARK(BM_ChainRuleGradient)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ReferenceGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n);
  const sos::CoeffTensor4 t = random_tensor(n, rng);
  const sos::KappaParams k = random_kappa(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sos::reference_gradient(t, k));
}
BENCHMARK(BM_ReferenceGradient)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n);
  const sos::CoeffTensor4 t = random_tensor(n, rng);
  const sos::KappaParams k = random_kappa(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sos::transform_tensor(t, k));
}
BENCHMARK(BM_Transform)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
