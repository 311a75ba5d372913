// Pointwise kernel evaluation and the coefficient algebra.

#include <benchmark/benchmark.h>

#include <vector>

#include "nvk/convex_transform.hpp"
#include "nvk/kernels.hpp"
#include "nvk/random.hpp"

namespace {

struct KernelInputs {
  nvk::PolyUpperPoint z;
  std::vector<double> t;
  std::vector<double> b;
};

KernelInputs inputs(std::size_t n) {
  nvk::Rng rng(1);
  KernelInputs in{rng.poly_upper_point(n), std::vector<double>(n), std::vector<double>(n - 1)};
  for (double& x : in.t) x = rng.uniform(-5, 5);
  for (double& x : in.b) x = rng.uniform(0.3, 3.0);
  return in;
}

void BM_KnSum(benchmark::State& state) {
  const auto in = inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval_Kn_sum(in.z, in.t));
}
BENCHMARK(BM_KnSum)->DenseRange(1, 6);

void BM_KnRational(benchmark::State& state) {
  const auto in = inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval_Kn_rational(in.z, in.t));
}
BENCHMARK(BM_KnRational)->DenseRange(1, 6);

void BM_Ktilde0(benchmark::State& state) {
  const auto in = inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval_Ktilde0(in.z, in.t, in.b));
}
BENCHMARK(BM_Ktilde0)->DenseRange(2, 6);

void BM_BetaN(benchmark::State& state) {
  const auto in = inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nvk::beta_n(in.b));
}
BENCHMARK(BM_BetaN)->DenseRange(2, 8, 2);

void BM_KToB(benchmark::State& state) {
  nvk::Rng rng(2);
  const auto k = rng.convex_weights(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nvk::k_to_b(k));
}
BENCHMARK(BM_KToB)->DenseRange(2, 8, 2);

}  // namespace
