#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "nvk/errors.hpp"
#include "nvk/measures.hpp"
#include "nvk/random.hpp"
#include "unit/support.hpp"

using namespace nvk;
using nvk::test::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

Box box(std::initializer_list<Interval> axes) { return Box(std::vector<Interval>(axes)); }

double mass_of(const Measure& mu, const BoxUnion& u) {
  const auto r = mass(mu, u);
  REQUIRE_FALSE(r.diverged);
  return r.value.real();
}

Box random_box(Rng& rng, std::size_t k) {
  std::vector<Interval> axes;
  for (std::size_t j = 0; j < k; ++j) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    axes.push_back({std::min(a, b), std::max(a, b)});
  }
  return Box(axes);
}
}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("atom evaluation") {
    const auto r = integrate(Measure::dirac(0.0, kPi), [](std::span<const double> t) { return 1.0 / (t[0] - kI); });
    CHECK(r.converged);
    NVK_CHECK_CLOSE(r.value, cplx(0.0, kPi), 1e-15);
  }

  TEST_CASE("ladder line measure on a box") {
    // b = (1), scale 2 over pi delta_0: the antidiagonal with density 2 pi.
    const Measure mu = Measure::ladder(Measure::dirac(0.0, kPi), {1.0}, 2.0);
    CHECK(rel_err(mass_of(mu, {box({{-1, 0}, {0, 1}})}), 2.0 * kPi) < 1e-12);
    CHECK(mass_of(mu, {box({{1, 2}, {1, 2}})}) == doctest::Approx(0.0));
  }

  TEST_CASE("product of an atom and lebesgue") {
    const Measure mu = Measure::product({Measure::dirac(0.0, kPi), Measure::lebesgue(1)});
    const auto r = integrate(mu, [](std::span<const double> t) {
      return cplx(1.0 / ((1.0 + t[0] * t[0]) * (1.0 + t[1] * t[1])));
    });
    CHECK(rel_err(r.value, kPi * kPi) < 1e-12);
    CHECK(rel_err(mass_of(mu, {box({{-1, 1}, {0, 2}})}), 2.0 * kPi) < 1e-14);
  }

  TEST_CASE("pushforward supported on a line") {
    const Measure mu = Measure::pushforward_2d(Measure::dirac(0.0, kPi), 1, 1, 1, -1);
    CHECK(rel_err(mass_of(mu, {box({{-1, 1}, {-1, 1}})}), 2.0 * kPi) < 1e-12);
  }

  TEST_CASE("identity pushforward is the product with lebesgue") {
    Rng rng(3);
    const Measure base = Measure::atomic(1, {{{0.5}, 1.0}, {{-1.0}, 2.0}});
    const Measure pf = Measure::pushforward_2d(base, 1, 0, 0, 1);
    const Measure prod = Measure::product({base, Measure::lebesgue(1)});
    for (int s = 0; s < 20; ++s) {
      const BoxUnion u{random_box(rng, 2)};
      CHECK(mass_of(pf, u) == doctest::Approx(mass_of(prod, u)).epsilon(1e-10));
    }
  }

  TEST_CASE("mass is positive, additive and monotone") {
    Rng rng(17);
    const std::vector<Measure> measures = {
        Measure::atomic(2, {{{0.1, 0.2}, 1.0}, {{-1.0, 1.5}, 0.5}}),
        Measure::lebesgue(2),
        Measure::pushforward_2d(Measure::dirac(0.3, 2.0), 1, 1, 1, -1),
        Measure::ladder(Measure::atomic(1, {{{0.0}, 1.0}, {{1.0}, 3.0}}), {0.5}, 1.5),
    };
    for (const Measure& mu : measures) {
      for (int s = 0; s < 10; ++s) {
        const Box b = random_box(rng, 2);
        CHECK(mass_of(mu, {b}) >= 0.0);
        // Split along axis 0 at the midpoint: the halves share only a face,
        // which has measure zero for the continuous parts.
        const double mid = 0.5 * (b.axes[0].lo + b.axes[0].hi);
        Box left = b, right = b;
        left.axes[0].hi = mid;
        right.axes[0].lo = std::nextafter(mid, INFINITY);
        CHECK(mass_of(mu, {left}) + mass_of(mu, {right}) ==
              doctest::Approx(mass_of(mu, {b})).epsilon(1e-9).scale(1.0));
        Box bigger = b;
        bigger.axes[1].hi += 1.0;
        CHECK(mass_of(mu, {b}) <= mass_of(mu, {bigger}) + 1e-9);
      }
    }
  }

  TEST_CASE("union of overlapping boxes counts the overlap once") {
    const Measure mu = Measure::lebesgue(2);
    const BoxUnion u{box({{0, 2}, {0, 1}}), box({{1, 3}, {0, 1}})};
    CHECK(mass_of(mu, u) == doctest::Approx(3.0));
  }

  TEST_CASE("atoms on the boundary count as inside") {
    const Measure mu = Measure::dirac(1.0, 2.5);
    CHECK(mass_of(mu, {box({{1, 2}})}) == 2.5);
    CHECK(mass_of(mu, {box({{1.5, 2}})}) == 0.0);
  }

  TEST_CASE("density measure with support") {
    Density d;
    d.fn = [](std::span<const double> t) { return 2.0 * t[0]; };
    d.expression = "2*t1";
    const Measure mu = Measure::with_density(1, d, Box({{0.0, 1.0}}));
    const auto r = integrate(mu, [](std::span<const double> t) { return cplx(t[0]); });
    CHECK(rel_err(r.value, 2.0 / 3.0) < 1e-12);
  }

  TEST_CASE("unbounded lebesgue growth diverges") {
    const auto r = integrate(Measure::lebesgue(1), [](std::span<const double>) { return cplx(1.0); });
    CHECK(r.diverged);
  }

  TEST_CASE("padded measure places lebesgue on the missing axes") {
    const Measure mu = Measure::padded(Measure::dirac(0.0, kPi), {1}, 2);
    CHECK(mu.dimension() == 2);
    const auto r = integrate(mu, [](std::span<const double> t) {
      return cplx(1.0 / ((1.0 + t[0] * t[0]) * (1.0 + t[1] * t[1])));
    });
    CHECK(rel_err(r.value, kPi * kPi) < 1e-12);
  }

  TEST_CASE("invalid construction is rejected") {
    CHECK_THROWS_AS(Measure::dirac(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Measure::dirac(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Measure::ladder(Measure::dirac(0.0), {0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Measure::pushforward_2d(Measure::lebesgue(2), 1, 0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Measure::product({Measure::lebesgue(2)}), std::invalid_argument);
    CHECK_THROWS_AS(Box({{1.0, 0.0}}), std::invalid_argument);
  }

  TEST_CASE("dimension mismatch in mass") {
    CHECK_THROWS(mass(Measure::lebesgue(2), {box({{0, 1}})}));
  }
}
