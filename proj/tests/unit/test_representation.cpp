#include <cmath>
#include <numbers>
#include <vector>

#include "nvk/convex_transform.hpp"
#include "nvk/errors.hpp"
#include "nvk/random.hpp"
#include "nvk/representation.hpp"
#include "unit/support.hpp"

using namespace nvk;
using nvk::test::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

RepresentationData minus_inverse() { return {0.0, {0.0}, Measure::dirac(0.0, kPi)}; }
}  // namespace

TEST_SUITE("representation") {
  TEST_CASE("pi delta_0 represents -1/z") {
    NVK_CHECK_CLOSE(eval(minus_inverse(), PolyUpperPoint{kI}), kI, 1e-15);
    Rng rng(21);
    for (int s = 0; s < 20; ++s) {
      const cplx z = rng.upper_point();
      CHECK(rel_err(eval(minus_inverse(), PolyUpperPoint{z}), -1.0 / z) < 1e-14);
    }
  }

  TEST_CASE("linear part only") {
    const RepresentationData d{1.0, {0.0, 2.0}, Measure::zero(2)};
    NVK_CHECK_CLOSE(eval(d, PolyUpperPoint{kI, 2.0 * kI}), cplx(1.0, 4.0), 1e-15);
  }

  TEST_CASE("ladder measure of the midpoint example") {
    const RepresentationData d{0.0, {0.0, 0.0}, Measure::ladder(Measure::dirac(0.0, kPi), {1.0}, 2.0)};
    NVK_CHECK_CLOSE(eval(d, PolyUpperPoint{kI, kI}), kI, 1e-14);
    Rng rng(22);
    for (int s = 0; s < 10; ++s) {
      const PolyUpperPoint z = rng.poly_upper_point(2);
      const cplx want = -2.0 / (z[0] + z[1]);
      CHECK(rel_err(eval(d, z, {}, Reduction::ClosedForm), want) < 1e-12);
      CHECK(rel_err(eval(d, z, {}, Reduction::Quadrature), want) < 1e-7);
    }
  }

  TEST_CASE("density measure against an independent value") {
    // exp(-t^2) dt at z = 1 + i; reference from a 25-digit evaluation.
    Density g;
    g.fn = [](std::span<const double> t) { return std::exp(-t[0] * t[0]); };
    g.expression = "exp(-t1^2)";
    const RepresentationData d{0.0, {0.0}, Measure::with_density(1, g)};
    const cplx want(-0.2082189382028316272874373, 0.3047442052569125924571388);
    CHECK(rel_err(eval(d, PolyUpperPoint{cplx(1, 1)}), want) < 1e-9);
  }

  TEST_CASE("convex form evaluation") {
    const double k2[] = {0.5, 0.5};
    NVK_CHECK_CLOSE(eval_convex_form(minus_inverse(), k2, PolyUpperPoint{kI, 3.0 * kI}), cplx(0.0, 0.5), 1e-8);
    const double k3[] = {0.5, 0.25, 0.25};
    NVK_CHECK_CLOSE(eval_convex_form(minus_inverse(), k3, PolyUpperPoint{kI, kI, kI}), kI, 1e-7);
    const RepresentationData identity{0.0, {1.0}, Measure::zero(1)};
    const PolyUpperPoint z{cplx(1, 2), cplx(-3, 0.5)};
    NVK_CHECK_CLOSE(eval_convex_form(identity, k2, z), 0.5 * (z[0] + z[1]), 1e-14);
  }

  TEST_CASE("herglotz positivity") {
    const auto r1 = check_herglotz(minus_inverse(), 100, 1);
    CHECK(r1.passed);
    CHECK(r1.min_imag > 0.0);
    const auto r2 = check_herglotz({0.0, {1.0, 1.0}, Measure::zero(2)}, 100, 2);
    CHECK(r2.passed);
    CHECK(r2.min_imag > 0.0);
    const double k[] = {0.5, 0.5};
    const auto r3 = check_herglotz(transform(minus_inverse(), k), 100, 3);
    CHECK(r3.passed);
    CHECK(r3.min_imag > 0.0);
  }

  TEST_CASE("growth violation is reported") {
    Density heavy;
    heavy.fn = [](std::span<const double> t) { return 1.0 + t[0] * t[0]; };
    heavy.expression = "1+t1^2";
    const RepresentationData d{0.0, {0.0}, Measure::with_density(1, heavy)};
    CHECK_THROWS_AS(eval(d, PolyUpperPoint{kI}), GrowthViolation);
  }

  TEST_CASE("invalid data is rejected") {
    CHECK_THROWS_AS(eval({0.0, {-1.0}, Measure::zero(1)}, PolyUpperPoint{kI}), DomainError);
    CHECK_THROWS_AS(eval({0.0, {0.0}, Measure::zero(2)}, PolyUpperPoint{kI}), DomainError);
    CHECK_THROWS_AS(eval(minus_inverse(), PolyUpperPoint{kI, kI}), DomainError);
    CHECK_THROWS_AS(eval({NAN, {0.0}, Measure::zero(1)}, PolyUpperPoint{kI}), DomainError);
  }
}
