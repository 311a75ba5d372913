#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/measures.hpp"
#include "nvk/quadrature.hpp"
#include "nvk/random.hpp"
#include "nvk/residue_oracle.hpp"
#include "unit/support.hpp"

using namespace nvk;
using nvk::test::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

void check_result_invariants(const QuadratureResult& r, const QuadratureConfig& cfg) {
  CHECK_FALSE((r.converged && r.diverged));
  CHECK(r.error_estimate >= 0.0);
  if (r.converged) CHECK(r.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value)) * 1.0000001);
}
}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("lorentzian integrates to pi") {
    const QuadratureConfig cfg;
    const auto r = integrate_line([](double t) { return cplx(1.0 / (1.0 + t * t)); }, cfg);
    CHECK(r.converged);
    CHECK(rel_err(r.value, kPi) < 1e-12);
    check_result_invariants(r, cfg);
  }

  TEST_CASE("squared lorentzian matches the residue value pi/2") {
    const auto r = integrate_line([](double t) { return cplx(1.0 / ((1.0 + t * t) * (1.0 + t * t))); });
    CHECK(r.converged);
    CHECK(rel_err(r.value, kPi / 2.0) < 1e-12);
  }

  TEST_CASE("constant integrand diverges") {
    const auto r = integrate_line([](double) { return cplx(1.0); });
    CHECK(r.diverged);
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("slowly decaying 1/|t| tail diverges") {
    const auto r = integrate_line([](double t) { return cplx(1.0 / (1.0 + std::abs(t))); });
    CHECK(r.diverged);
  }

  TEST_CASE("complex integrand with a gaussian factor") {
    // int exp(-t^2) / (t - i) dt = i pi e erfc(1); value from mpmath.
    const cplx want(0.0, 1.3432934216467352);
    const auto r = integrate_line([](double t) { return std::exp(-t * t) / (t - kI); });
    CHECK(r.converged);
    CHECK(rel_err(r.value, want) < 1e-10);
  }

  TEST_CASE("half-lines and finite intervals") {
    auto f = [](double t) { return cplx(1.0 / (1.0 + t * t)); };
    CHECK(rel_err(integrate_interval(f, 0.0, INFINITY).value, kPi / 2.0) < 1e-12);
    CHECK(rel_err(integrate_interval(f, -INFINITY, 1.0).value, 0.75 * kPi) < 1e-12);
    CHECK(rel_err(integrate_interval(f, -1.0, 1.0).value, kPi / 2.0) < 1e-12);
    CHECK(rel_err(integrate_interval(f, 1.0, -1.0).value, -kPi / 2.0) < 1e-12);
    CHECK(integrate_interval(f, 2.0, 2.0).value == cplx(0.0));
  }

  TEST_CASE("narrow peak far from the origin on a half-line") {
    // Width 0.1 at 1e7: t = c + tan(theta) keeps the peak resolved.
    const double c = 1e7, w = 0.1;
    auto f = [&](double t) { return cplx(w / ((t - c) * (t - c) + w * w)); };
    const auto r = integrate_interval(f, c - 5.0, INFINITY);
    CHECK(r.converged);
    CHECK(rel_err(r.value, kPi / 2.0 + std::atan(5.0 / w)) < 1e-9);
  }

  TEST_CASE("non-finite integrand throws") {
    CHECK_THROWS_AS(integrate_line([](double) { return cplx(NAN); }), QuadratureError);
  }

  TEST_CASE("config validation") {
    QuadratureConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.abs_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_subdivisions = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("linearity and conjugation") {
    Rng rng(11);
    for (int s = 0; s < 20; ++s) {
      const cplx z1 = rng.upper_point(), z2 = rng.upper_point();
      const cplx alpha(rng.uniform(-2, 2), rng.uniform(-2, 2)), beta(rng.uniform(-2, 2), rng.uniform(-2, 2));
      auto f = [&](double t) { return 1.0 / ((t - z1) * (t - std::conj(z2))); };
      auto g = [&](double t) { return 1.0 / ((t - z2) * (t - z2) + 1.0); };
      const cplx If = integrate_line(f).value, Ig = integrate_line(g).value;
      const cplx Ifg = integrate_line([&](double t) { return alpha * f(t) + beta * g(t); }).value;
      CHECK(std::abs(Ifg - (alpha * If + beta * Ig)) <= 1e-9 * (std::abs(alpha * If) + std::abs(beta * Ig)) + 1e-12);
      const cplx Ic = integrate_line([&](double t) { return std::conj(f(t)); }).value;
      CHECK(std::abs(Ic - std::conj(If)) <= 1e-9 * std::abs(If) + 1e-12);
    }
  }

  TEST_CASE("agrees with residues on random rational functions") {
    Rng rng(5);
    for (int s = 0; s < 50; ++s) {
      const int deg = rng.integer(2, 5);
      std::vector<cplx> roots;
      for (int j = 0; j < deg; ++j) {
        cplx r = rng.upper_point(3.0, 0.3, 3.0);
        if (rng.uniform() < 0.5) r = std::conj(r);
        roots.push_back(r);
      }
      std::vector<cplx> num;
      for (int j = 0; j <= deg - 2; ++j) num.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
      const RationalFunction f(ComplexPolynomial(num), ComplexPolynomial::from_roots(roots));
      const auto q = integrate_line([&](double t) { return f(t); });
      REQUIRE(q.converged);
      const cplx exact = line_integral(f);
      CHECK(std::abs(q.value - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }

  TEST_CASE("iterated: separable product") {
    const std::size_t order[] = {1, 0};
    const auto r = integrate_iterated(
        [](std::span<const double> t) { return cplx(1.0 / ((1.0 + t[0] * t[0]) * (1.0 + t[1] * t[1]))); }, order);
    CHECK(r.converged);
    CHECK(rel_err(r.value, kPi * kPi) < 1e-10);
    const std::size_t other[] = {0, 1};
    CHECK(rel_err(integrate_iterated(
                      [](std::span<const double> t) {
                        return cplx(1.0 / ((1.0 + t[0] * t[0]) * (1.0 + t[1] * t[1])));
                      },
                      other)
                      .value,
                  kPi * kPi) < 1e-10);
  }

  TEST_CASE("iterated: cancelling two-variable integrand vanishes") {
    // 1 / ((t1 - i)^2 (t2 + i)^2): each inner integral has both poles on one side.
    const std::size_t order[] = {1, 0};
    const auto r = integrate_iterated(
        [](std::span<const double> t) {
          const cplx a = t[0] - kI, b = t[1] + kI;
          return 1.0 / (a * a * b * b);
        },
        order);
    CHECK(std::abs(r.value) < 1e-10);
  }

  TEST_CASE("iterated: divergent inner integral") {
    const std::size_t order[] = {1, 0};
    const auto r = integrate_iterated([](std::span<const double> t) { return cplx(1.0 / (1.0 + t[0] * t[0])); }, order);
    CHECK(r.diverged);
  }

  TEST_CASE("iterated over a box") {
    const std::size_t order[] = {0, 1};
    const std::pair<double, double> bounds[] = {{0.0, 1.0}, {-INFINITY, INFINITY}};
    const auto r = integrate_iterated(
        [](std::span<const double> t) { return cplx(t[0] / (1.0 + t[1] * t[1])); }, order, bounds);
    CHECK(rel_err(r.value, kPi / 2.0) < 1e-10);
  }

  TEST_CASE("inner levels carry no absolute error floor") {
    // Pushforward of lebesgue with (1,1,1,2): the signed integral is exactly
    // zero while int |f| is of order 10; an absolute floor at the inner level
    // would accumulate over the unbounded outer range.
    const Measure mu = Measure::pushforward_2d(Measure::lebesgue(1), 1, 1, 1, 2);
    const cplx z1(6.25, 2.5551), w2(-4.4, -1.52642);
    const auto f = [&](std::span<const double> t) {
      const cplx a = t[0] - z1, b = t[1] - w2;
      return 1.0 / (a * a * b * b);
    };
    const auto r = integrate(mu, f);
    const auto s = integrate(mu, [&](std::span<const double> t) { return cplx(std::abs(f(t))); });
    CHECK(s.converged);
    CHECK(std::abs(r.value) <= 1e-12 * s.value.real());
  }
}
