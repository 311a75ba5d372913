#include "nvk/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "nvk/errors.hpp"
#include "nvk/random.hpp"

namespace nvk {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

bool vanishes(cplx value, double scale) { return std::abs(value) <= std::max(1e-8, 1e-6 * scale); }

NevanlinnaValue nevanlinna_integral(const Measure& mu, const MultiIntegrand& f, const QuadratureConfig& cfg) {
  NevanlinnaValue out;
  const QuadratureResult s = integrate(
      mu, [&](std::span<const double> t) { return cplx(std::abs(f(t)), 0.0); }, cfg);
  if (s.diverged) {
    // Absolute divergence; the signed integral is then not defined either.
    out.value = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    out.scale = kInf;
    out.diverged = true;
    return out;
  }
  out.scale = s.value.real();
  // Absolute convergence already rules out divergence of the signed integral.
  QuadratureConfig signed_cfg = cfg;
  signed_cfg.detect_divergence = !s.converged;
  const QuadratureResult v = integrate(mu, f, signed_cfg);
  out.value = v.value;
  out.converged = v.converged;
  out.diverged = v.diverged;
  out.vanishes = !v.diverged && s.converged && vanishes(v.value, out.scale);
  return out;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

std::string_view to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::i1: return "i1";
    case CaseLabel::i2: return "i2";
    case CaseLabel::ii1: return "ii1";
    case CaseLabel::ii2: return "ii2";
    case CaseLabel::iii1a: return "iii1a";
    case CaseLabel::iii1b: return "iii1b";
    case CaseLabel::iii2a: return "iii2a";
    case CaseLabel::iii2b: return "iii2b";
    case CaseLabel::NotRepresenting: return "NotRepresenting";
  }
  return "NotRepresenting";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Representing: return "true";
    case Verdict::NotRepresenting: return "false";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

void MeasureTraits::validate() const {
  if (is_zero && !is_finite) throw DomainError("measure traits: a zero measure is finite");
  if (is_finite && !satisfies_1var_growth) throw DomainError("measure traits: a finite measure satisfies the growth condition");
}

CaseLabel Classification::label() const {
  return verdict == Verdict::NotRepresenting ? CaseLabel::NotRepresenting : structural_case;
}

Classification classify_pushforward2d(double alpha, double beta, double gamma, double delta,
                                      const MeasureTraits& traits) {
  traits.validate();
  Classification c;
  auto require = [&](CaseLabel label, bool ok, const char* need) {
    c.structural_case = label;
    c.verdict = ok ? Verdict::Representing : Verdict::NotRepresenting;
    if (!ok) c.reason = need;
    return c;
  };

  if (beta == 0.0 && delta == 0.0) {
    c.reason = "beta and delta both zero: the inner integral is infinite unless the measure is zero";
    // The zero measure is trivially representing, but it is not one of the cases.
    return c;
  }
  if (beta == 0.0) {
    if (alpha == 0.0) return require(CaseLabel::i1, traits.is_finite, "base measure must be finite");
    return require(CaseLabel::i2, traits.satisfies_1var_growth, "base measure must satisfy the growth condition");
  }
  if (delta == 0.0) {
    if (gamma == 0.0) return require(CaseLabel::ii1, traits.is_finite, "base measure must be finite");
    return require(CaseLabel::ii2, traits.satisfies_1var_growth, "base measure must satisfy the growth condition");
  }
  const double det = alpha * delta - beta * gamma;
  if (beta * delta < 0.0) {
    if (det == 0.0) return require(CaseLabel::iii1a, traits.is_finite, "base measure must be finite");
    return require(CaseLabel::iii1b, traits.satisfies_1var_growth, "base measure must satisfy the growth condition");
  }
  if (det == 0.0) return require(CaseLabel::iii2a, traits.is_zero, "base measure must be identically zero");
  if (!traits.satisfies_1var_growth) {
    return require(CaseLabel::iii2b, false, "base measure must satisfy the growth condition");
  }
  if (!traits.satisfies_cubic_condition.has_value()) {
    c.structural_case = CaseLabel::iii2b;
    c.verdict = Verdict::Indeterminate;
    c.reason = "cubic condition not evaluated";
    return c;
  }
  return require(CaseLabel::iii2b, *traits.satisfies_cubic_condition, "base measure violates the cubic condition");
}

QuadratureResult check_growth(const Measure& mu, const QuadratureConfig& cfg) {
  return integrate(
      mu,
      [](std::span<const double> t) {
        double p = 1.0;
        for (double tj : t) p *= 1.0 + tj * tj;
        return cplx(1.0 / p, 0.0);
      },
      cfg);
}

NevanlinnaValue check_nevanlinna_2var(const Measure& mu, cplx z1, cplx z2, const QuadratureConfig& cfg) {
  if (mu.dimension() != 2) throw DomainError("check_nevanlinna_2var: measure must live on R^2");
  (void)PolyUpperPoint({z1, z2});
  const cplx w2 = std::conj(z2);
  return nevanlinna_integral(
      mu,
      [&](std::span<const double> t) {
        const cplx a = t[0] - z1;
        const cplx b = t[1] - w2;
        return 1.0 / (a * a * b * b);
      },
      cfg);
}

std::size_t nevanlinna_term_count(std::size_t n) { return ipow(3, n) - 2 * ipow(2, n) + 1; }

NevanlinnaValue check_nevanlinna_nvar(const Measure& mu, const PolyUpperPoint& z, const QuadratureConfig& cfg) {
  const std::size_t n = z.size();
  if (mu.dimension() != n) throw DomainError("check_nevanlinna_nvar: dimensions differ");
  if (n < 2 || n > 10) throw DomainError("check_nevanlinna_nvar: need 2 <= n <= 10");
  std::vector<std::vector<int>> patterns;
  for (std::size_t code = 0; code < ipow(3, n); ++code) {
    std::vector<int> rho(n);
    std::size_t c = code;
    bool neg = false, pos = false;
    for (std::size_t j = 0; j < n; ++j, c /= 3) {
      rho[j] = static_cast<int>(c % 3) - 1;
      neg |= rho[j] == -1;
      pos |= rho[j] == 1;
    }
    if (neg && pos) patterns.push_back(std::move(rho));
  }
  return nevanlinna_integral(
      mu,
      [&](std::span<const double> t) {
        // N_{-1}, N_0, N_1 per coordinate, then the sum of products.
        std::vector<std::array<cplx, 3>> N(n);
        for (std::size_t j = 0; j < n; ++j) {
          const cplx ti = 1.0 / (t[j] - kI);
          const cplx tmi = 1.0 / (t[j] + kI);
          N[j] = {1.0 / (t[j] - z[j]) - ti, ti - tmi, tmi - 1.0 / (t[j] - std::conj(z[j]))};
        }
        cplx sum;
        for (const auto& rho : patterns) {
          cplx p{1.0, 0.0};
          for (std::size_t j = 0; j < n; ++j) p *= N[j][static_cast<std::size_t>(rho[j] + 1)];
          sum += p;
        }
        return sum;
      },
      cfg);
}

std::vector<PolyUpperPoint> z_grid(std::size_t n, std::size_t count, std::uint64_t seed) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (2 * n > std::size(kPrimes)) throw DomainError("z_grid: at most 10 coordinates");
  const double lo = std::log(0.1);
  const double hi = std::log(10.0);
  std::vector<PolyUpperPoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::uint64_t index = seed + s + 1;
    std::vector<cplx> z(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double re = -10.0 + 20.0 * halton(index, kPrimes[2 * j]);
      const double im = std::exp(lo + (hi - lo) * halton(index, kPrimes[2 * j + 1]));
      z[j] = {re, im};
    }
    out.emplace_back(std::move(z));
  }
  return out;
}

CubicCheck check_cubic_condition(double det, double delta, double beta, const Measure& mu1,
                                 std::span<const PolyUpperPoint> zs, const QuadratureConfig& cfg) {
  if (det == 0.0) throw DomainError("check_cubic_condition: alpha delta - beta gamma must be nonzero");
  if (mu1.dimension() != 1) throw DomainError("check_cubic_condition: base measure must be one-dimensional");
  CubicCheck out;
  out.holds = true;
  for (const PolyUpperPoint& z : zs) {
    if (z.size() != 2) throw DomainError("check_cubic_condition: grid points must lie in C^{+2}");
    const cplx shift = -delta * z[0] + beta * std::conj(z[1]);
    const NevanlinnaValue v = nevanlinna_integral(
        mu1,
        [&](std::span<const double> t) {
          const cplx w = det * t[0] + shift;
          return 1.0 / (w * w * w);
        },
        cfg);
    if (v.diverged || !std::isfinite(v.scale)) out.quadrature_ok = false;
    out.max_modulus = std::max(out.max_modulus, std::abs(v.value));
    out.scale = std::max(out.scale, v.scale);
    if (!v.vanishes) out.holds = false;
  }
  return out;
}

MeasureTraits infer_traits(const Measure& mu1, double alpha, double beta, double gamma, double delta,
                           const QuadratureConfig& cfg) {
  if (mu1.dimension() != 1) throw DomainError("infer_traits: base measure must be one-dimensional");
  MeasureTraits t;
  t.is_zero = mu1.is_zero();
  if (t.is_zero) {
    t.is_finite = t.satisfies_1var_growth = true;
  } else {
    const QuadratureResult total = mass(mu1, {Box({Interval{-kInf, kInf}})}, cfg);
    t.is_finite = total.converged && !total.diverged;
    const QuadratureResult growth = check_growth(mu1, cfg);
    t.satisfies_1var_growth = t.is_finite || (growth.converged && !growth.diverged);
  }
  const double det = alpha * delta - beta * gamma;
  if (beta * delta > 0.0 && det != 0.0 && t.satisfies_1var_growth) {
    if (t.is_zero) {
      t.satisfies_cubic_condition = true;
    } else {
      const auto grid = z_grid(2);
      const CubicCheck c = check_cubic_condition(det, delta, beta, mu1, grid, cfg);
      if (c.quadrature_ok) t.satisfies_cubic_condition = c.holds;
    }
  }
  return t;
}

}  // namespace nvk

namespace nvk {

ClassificationEvidence gather_evidence(const Measure& pushforward, std::span<const PolyUpperPoint> grid,
                                       const QuadratureConfig& cfg) {
  ClassificationEvidence e;
  e.growth = check_growth(pushforward, cfg);
  for (const PolyUpperPoint& z : grid) {
    const NevanlinnaValue v = check_nevanlinna_2var(pushforward, z[0], z[1], cfg);
    if (v.diverged || !std::isfinite(v.scale)) {
      e.max_nevanlinna_modulus = e.max_nevanlinna_ratio = std::numeric_limits<double>::infinity();
      break;
    }
    const double mod = std::abs(v.value);
    e.max_nevanlinna_modulus = std::max(e.max_nevanlinna_modulus, mod);
    if (mod > 0.0) e.max_nevanlinna_ratio = std::max(e.max_nevanlinna_ratio, mod / v.scale);
  }
  return e;
}

ClassifyOutcome classify_measure(double alpha, double beta, double gamma, double delta, const Measure& mu1,
                                 const QuadratureConfig& cfg) {
  ClassifyOutcome out;
  out.traits = infer_traits(mu1, alpha, beta, gamma, delta, cfg);
  out.classification = classify_pushforward2d(alpha, beta, gamma, delta, out.traits);
  const auto grid = z_grid(2);
  out.evidence = gather_evidence(Measure::pushforward_2d(mu1, alpha, beta, gamma, delta), grid, cfg);
  return out;
}

std::vector<ClassificationFixture> classification_fixtures() {
  const Measure atom = Measure::dirac(0.0, std::numbers::pi);
  const Measure leb = Measure::lebesgue(1);
  const Measure zero = Measure::zero(1);
  using C = CaseLabel;
  return {
      {"i1", 0, 0, 1, 1, atom, "pi*delta_0", C::i1, true},
      {"i2", 1, 0, 1, 1, leb, "lebesgue", C::i2, true},
      {"ii1", 0, 1, 0, 0, atom, "pi*delta_0", C::ii1, true},
      {"ii2", 1, 1, 1, 0, leb, "lebesgue", C::ii2, true},
      {"iii1a", 1, 1, -1, -1, atom, "pi*delta_0", C::iii1a, true},
      {"iii1b", 1, 1, 1, -1, leb, "lebesgue", C::iii1b, true},
      {"iii2a", 1, 1, 1, 1, zero, "zero", C::iii2a, true},
      {"iii2b", 1, 1, 1, 2, leb, "lebesgue", C::iii2b, true},
      {"neg_beta_delta_zero", 1, 0, 1, 0, atom, "pi*delta_0", C::NotRepresenting, false},
      {"neg_iii2a_lebesgue", 1, 1, 1, 1, leb, "lebesgue", C::NotRepresenting, false},
      {"neg_iii2a_scaled", 2, 2, 1, 1, leb, "lebesgue", C::NotRepresenting, false},
  };
}

}  // namespace nvk
