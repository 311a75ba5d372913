// Quadrature, residue sums and representation evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nvk/convex_transform.hpp"
#include "nvk/quadrature.hpp"
#include "nvk/random.hpp"
#include "nvk/representation.hpp"
#include "nvk/residue_oracle.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
const nvk::cplx kI{0.0, 1.0};

void BM_LineLorentzian(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(nvk::integrate_line([](double t) { return nvk::cplx(1.0 / (1.0 + t * t)); }));
  }
}
BENCHMARK(BM_LineLorentzian);

void BM_ResidueLadderIntegrand(benchmark::State& state) {
  nvk::Rng rng(3);
  nvk::LadderKernelParams p;
  p.m = static_cast<int>(state.range(0));
  p.d = 0;
  p.b.resize(static_cast<std::size_t>(p.n() - 1));
  for (double& x : p.b) x = rng.uniform(0.3, 3.0);
  const auto z = rng.poly_upper_point(static_cast<std::size_t>(p.n()));
  std::vector<double> t(static_cast<std::size_t>(p.m - 1));
  for (double& x : t) x = rng.uniform(-5, 5);
  const auto f = nvk::ladder_integrand(z, t, p);
  for (auto _ : state) benchmark::DoNotOptimize(nvk::line_integral(f));
}
BENCHMARK(BM_ResidueLadderIntegrand)->DenseRange(2, 4);

void BM_EvalAtomicTransform(benchmark::State& state) {
  const nvk::RepresentationData base{0.0, {0.0}, nvk::Measure::dirac(0.0, kPi)};
  nvk::Rng rng(4);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto data = nvk::transform(base, rng.convex_weights(n));
  const auto z = rng.poly_upper_point(n);
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval(data, z));
}
BENCHMARK(BM_EvalAtomicTransform)->DenseRange(2, 4);

void BM_EvalGaussianDensity(benchmark::State& state) {
  nvk::Density g;
  g.fn = [](std::span<const double> t) { return std::exp(-t[0] * t[0]); };
  g.expression = "exp(-t1^2)";
  const nvk::RepresentationData data{0.0, {0.0}, nvk::Measure::with_density(1, g)};
  const nvk::PolyUpperPoint z{nvk::cplx(0.5, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval(data, z));
}
BENCHMARK(BM_EvalGaussianDensity)->Unit(benchmark::kMicrosecond);

void BM_EvalLebesgueMidpoint(benchmark::State& state) {
  const nvk::RepresentationData base{0.0, {0.0}, nvk::Measure::dirac(0.0, kPi)};
  const double k[] = {0.5, 0.5};
  const auto data = nvk::transform(base, k);
  const nvk::PolyUpperPoint z{kI, 2.0 * kI};
  for (auto _ : state) benchmark::DoNotOptimize(nvk::eval(data, z));
}
BENCHMARK(BM_EvalLebesgueMidpoint);

}  // namespace
