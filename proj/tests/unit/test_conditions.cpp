#include <cmath>
#include <numbers>
#include <vector>

#include "nvk/conditions.hpp"
#include "nvk/convex_transform.hpp"
#include "nvk/errors.hpp"
#include "nvk/random.hpp"
#include "unit/support.hpp"

using namespace nvk;
using nvk::test::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

MeasureTraits traits(bool zero, bool finite, bool growth, std::optional<bool> cubic = std::nullopt) {
  MeasureTraits t;
  t.is_zero = zero;
  t.is_finite = finite;
  t.satisfies_1var_growth = growth;
  t.satisfies_cubic_condition = cubic;
  return t;
}

const MeasureTraits kZero = traits(true, true, true, true);
const MeasureTraits kFinite = traits(false, true, true);
const MeasureTraits kGrowth = traits(false, false, true);
const MeasureTraits kNone = traits(false, false, false);
}  // namespace

TEST_SUITE("conditions") {
  TEST_CASE("growth integrals") {
    const auto leb2 = check_growth(Measure::lebesgue(2));
    CHECK(leb2.converged);
    CHECK(rel_err(leb2.value, kPi * kPi) < 1e-10);
    // det = -2 halves the density of the image of lebesgue.
    const auto half = check_growth(Measure::pushforward_2d(Measure::lebesgue(1), 1, 1, 1, -1));
    CHECK(half.converged);
    CHECK(rel_err(half.value, kPi * kPi / 2.0) < 1e-9);
    // The image of lebesgue under a singular map concentrates on a line.
    CHECK(check_growth(Measure::pushforward_2d(Measure::lebesgue(1), 1, 1, 1, 1)).diverged);
  }

  TEST_CASE("two-variable nevanlinna integrals") {
    const cplx z1(0.5, 1.0), z2(-1.0, 2.0);
    const auto leb = check_nevanlinna_2var(Measure::lebesgue(2), z1, z2);
    CHECK(leb.vanishes);
    CHECK(std::abs(leb.value) < 1e-10);
    const Measure atoms = Measure::product({Measure::dirac(0.0, kPi), Measure::dirac(0.0, kPi)});
    const auto a = check_nevanlinna_2var(atoms, z1, z2);
    CHECK_FALSE(a.vanishes);
    NVK_CHECK_CLOSE(a.value, cplx(-0.442158277168803266, 1.515971236007325484), 1e-14);
    CHECK_THROWS_AS(check_nevanlinna_2var(Measure::lebesgue(1), z1, z2), DomainError);
  }

  TEST_CASE("pushforwards of representing cases have vanishing nevanlinna integrals") {
    const auto grid = z_grid(2, 4);
    for (const auto& f : classification_fixtures()) {
      if (!f.representing || f.name == "iii2b") continue;
      const Measure mu = Measure::pushforward_2d(f.base, f.alpha, f.beta, f.gamma, f.delta);
      for (const auto& z : grid) {
        const auto v = check_nevanlinna_2var(mu, z[0], z[1]);
        INFO(f.name);
        CHECK(v.vanishes);
      }
    }
  }

  TEST_CASE("n-variable nevanlinna sum") {
    CHECK(nevanlinna_term_count(2) == 2);
    CHECK(nevanlinna_term_count(3) == 12);
    CHECK(nevanlinna_term_count(4) == 50);

    const PolyUpperPoint z{cplx(0.5, 1), cplx(-1, 2), cplx(0.25, 0.5)};
    const auto atom = check_nevanlinna_nvar(Measure::atomic(3, {{{0.0, 0.0, 0.0}, 1.0}}), z);
    NVK_CHECK_CLOSE(atom.value, cplx(0.0, 1.104), 1e-14);
    CHECK_FALSE(atom.vanishes);

    // The ladder measure of a representing one-variable measure passes.
    const double k[] = {0.5, 0.25, 0.25};
    const Measure ladder = transform({0.0, {0.0}, Measure::dirac(0.0, kPi)}, k).mu;
    const auto v = check_nevanlinna_nvar(ladder, z);
    CHECK(std::abs(v.value) <= 1e-7);
    CHECK(v.vanishes);
    CHECK_THROWS_AS(check_nevanlinna_nvar(ladder, PolyUpperPoint{kI, kI}), DomainError);
  }

  TEST_CASE("z grid lies in the sampling box") {
    const auto grid = z_grid(3, 25);
    CHECK(grid.size() == 25);
    for (const auto& z : grid) {
      REQUIRE(z.size() == 3);
      for (const cplx& zj : z.coords()) {
        CHECK(std::abs(zj.real()) <= 10.0);
        CHECK(zj.imag() >= 0.1);
        CHECK(zj.imag() <= 10.0);
      }
    }
    CHECK(z_grid(2, 5, 7)[0][0] != z_grid(2, 5, 0)[0][0]);
  }

  TEST_CASE("structural cases from the coefficient signs") {
    auto label = [](double a, double b, double c, double d, const MeasureTraits& t) {
      return classify_pushforward2d(a, b, c, d, t).structural_case;
    };
    CHECK(label(0, 0, 1, 1, kFinite) == CaseLabel::i1);
    CHECK(label(1, 0, 1, 1, kGrowth) == CaseLabel::i2);
    CHECK(label(0, 1, 0, 0, kFinite) == CaseLabel::ii1);
    CHECK(label(1, 1, 1, 0, kGrowth) == CaseLabel::ii2);
    CHECK(label(1, 1, -1, -1, kFinite) == CaseLabel::iii1a);
    CHECK(label(1, 1, 1, -1, kGrowth) == CaseLabel::iii1b);
    CHECK(label(1, 1, 1, 1, kZero) == CaseLabel::iii2a);
    CHECK(label(1, 1, 1, 2, kGrowth) == CaseLabel::iii2b);
    CHECK(label(1, 0, 1, 0, kFinite) == CaseLabel::NotRepresenting);
  }

  TEST_CASE("verdicts follow the base measure requirements") {
    auto verdict = [](double a, double b, double c, double d, const MeasureTraits& t) {
      return classify_pushforward2d(a, b, c, d, t).verdict;
    };
    CHECK(verdict(0, 0, 1, 1, kFinite) == Verdict::Representing);
    CHECK(verdict(0, 0, 1, 1, kGrowth) == Verdict::NotRepresenting);
    CHECK(verdict(1, 0, 1, 1, kGrowth) == Verdict::Representing);
    CHECK(verdict(1, 0, 1, 1, kNone) == Verdict::NotRepresenting);
    CHECK(verdict(1, 1, 1, -1, kGrowth) == Verdict::Representing);
    CHECK(verdict(1, 1, -1, -1, kGrowth) == Verdict::NotRepresenting);
    CHECK(verdict(1, 1, 1, 1, kZero) == Verdict::Representing);
    CHECK(verdict(1, 1, 1, 1, kFinite) == Verdict::NotRepresenting);
    CHECK(verdict(1, 1, 1, 2, kGrowth) == Verdict::Indeterminate);
    CHECK(verdict(1, 1, 1, 2, traits(false, false, true, true)) == Verdict::Representing);
    CHECK(verdict(1, 1, 1, 2, traits(false, false, true, false)) == Verdict::NotRepresenting);
    CHECK(verdict(1, 1, 1, 2, kNone) == Verdict::NotRepresenting);
    const auto c = classify_pushforward2d(1, 1, 1, 1, kFinite);
    CHECK(c.label() == CaseLabel::NotRepresenting);
    CHECK_FALSE(c.reason.empty());
    CHECK(classify_pushforward2d(1, 1, 1, 2, kGrowth).label() == CaseLabel::iii2b);
  }

  TEST_CASE("inconsistent traits are rejected") {
    CHECK_THROWS_AS(classify_pushforward2d(1, 1, 1, 1, traits(true, false, true)), DomainError);
    CHECK_THROWS_AS(classify_pushforward2d(1, 1, 1, 1, traits(false, true, false)), DomainError);
  }

  TEST_CASE("cubic condition") {
    const auto grid = z_grid(2, 5);
    // det = 1, delta = 2, beta = 1: lebesgue integrates the cube to zero.
    const auto leb = check_cubic_condition(1.0, 2.0, 1.0, Measure::lebesgue(1), grid);
    CHECK(leb.holds);
    CHECK(leb.quadrature_ok);
    const auto atom = check_cubic_condition(1.0, 2.0, 1.0, Measure::dirac(0.0, kPi), grid);
    CHECK_FALSE(atom.holds);
    CHECK(atom.max_modulus > 1e-6);
  }

  TEST_CASE("trait inference") {
    const auto atom = infer_traits(Measure::dirac(0.0, kPi), 0, 0, 1, 1);
    CHECK_FALSE(atom.is_zero);
    CHECK(atom.is_finite);
    CHECK(atom.satisfies_1var_growth);
    const auto leb = infer_traits(Measure::lebesgue(1), 1, 1, 1, 2);
    CHECK_FALSE(leb.is_finite);
    CHECK(leb.satisfies_1var_growth);
    REQUIRE(leb.satisfies_cubic_condition.has_value());
    CHECK(*leb.satisfies_cubic_condition);
    CHECK(infer_traits(Measure::zero(1), 1, 1, 1, 1).is_zero);
  }

  TEST_CASE("classification examples") {
    const auto b = classify_measure(1, 1, 1, -1, Measure::lebesgue(1));
    CHECK(b.classification.label() == CaseLabel::iii1b);
    CHECK(b.classification.verdict == Verdict::Representing);
    CHECK(b.evidence.growth_converges());
    CHECK(b.evidence.max_nevanlinna_ratio < 1e-6);

    const auto a = classify_measure(1, 1, 1, 1, Measure::lebesgue(1));
    CHECK(a.classification.structural_case == CaseLabel::iii2a);
    CHECK(a.classification.verdict == Verdict::NotRepresenting);
    CHECK_FALSE(a.evidence.growth_converges());

    const auto n = classify_measure(1, 0, 1, 0, Measure::dirac(0.0, kPi));
    CHECK(n.classification.label() == CaseLabel::NotRepresenting);
  }

  TEST_CASE("fixtures cover every case") {
    const auto fx = classification_fixtures();
    CHECK(fx.size() == 11);
    std::size_t negatives = 0;
    for (const auto& f : fx) {
      if (!f.representing) {
        ++negatives;
        CHECK(f.expected == CaseLabel::NotRepresenting);
      }
    }
    CHECK(negatives == 3);
    for (CaseLabel c : {CaseLabel::i1, CaseLabel::i2, CaseLabel::ii1, CaseLabel::ii2, CaseLabel::iii1a,
                        CaseLabel::iii1b, CaseLabel::iii2a, CaseLabel::iii2b}) {
      bool found = false;
      for (const auto& f : fx) found = found || f.expected == c;
      INFO(to_string(c));
      CHECK(found);
    }
  }
}
