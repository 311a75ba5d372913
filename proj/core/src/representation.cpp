#include "nvk/representation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nvk/convex_transform.hpp"
#include "nvk/errors.hpp"
#include "nvk/random.hpp"

namespace nvk {

namespace {

using detail::NestState;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

cplx kernel(const PolyUpperPoint& z, std::span<const double> t) {
  if (z.size() == 1) return eval_K1(z[0], t[0]);
  return eval_Kn(z, t);
}

// pi^{-n} int K_n(z, .) dmu, with closed-form inner integrations where the
// measure's structure allows them.
cplx measure_term(const Measure& mu, const PolyUpperPoint& z, const QuadratureConfig& cfg,
                  Reduction reduction, NestState& st) {
  if (mu.is_zero()) return {};
  const std::size_t n = mu.dimension();
  if (reduction == Reduction::ClosedForm) {
    if (const auto* lad = mu.as<LadderMeasure>()) {
      // int over t_2..t_n of K_n(z, M_n t) = pi^{n-1}/beta_n K_1(sum k z, t_1).
      const std::vector<double> k = b_to_k(lad->b);
      cplx w;
      for (std::size_t l = 0; l < n; ++l) w += k[l] * z[l];
      const double factor = lad->scale / (kPi * beta_n(lad->b));
      detail::ErrorScale scale(st, factor);
      return factor * detail::integrate_nested_1d(
                          lad->base, [&](double t) { return eval_K1(w, t); }, cfg, st);
    }
    if (const auto* pad = mu.as<PaddedMeasure>()) {
      // Each Lebesgue axis integrates K_n down to pi K_{n-1}.
      return measure_term(pad->base, z.select(pad->base_axes), cfg, reduction, st);
    }
  }
  const double factor = std::pow(kPi, -static_cast<double>(n));
  detail::ErrorScale scale(st, factor);
  return factor * detail::integrate_nested(
                      mu, [&](std::span<const double> t) { return kernel(z, t); }, cfg, st);
}

cplx linear_part(const RepresentationData& data, const PolyUpperPoint& z) {
  cplx v = data.a;
  for (std::size_t l = 0; l < data.n(); ++l) v += data.b[l] * z[l];
  return v;
}

}  // namespace

void RepresentationData::validate() const {
  if (b.empty()) throw DomainError("representation: need at least one variable");
  if (!std::isfinite(a)) throw DomainError("representation: a must be finite");
  for (double bl : b) {
    if (!std::isfinite(bl) || bl < 0.0) throw DomainError("representation: every b_l must be >= 0");
  }
  if (mu.dimension() != b.size()) throw DomainError("representation: measure dimension differs from n");
}

EvalResult evaluate(const RepresentationData& data, const PolyUpperPoint& z, const QuadratureConfig& cfg,
                    Reduction reduction) {
  data.validate();
  cfg.validate();
  if (z.size() != data.n()) throw DomainError("eval: point has the wrong number of coordinates");
  const QuadratureResult r =
      detail::run_nested([&](NestState& st) { return measure_term(data.mu, z, cfg, reduction, st); });
  if (r.diverged) throw GrowthViolation("measure violates growth condition (numerically)");
  return {linear_part(data, z) + r.value, r.error_estimate, r.converged};
}

cplx eval(const RepresentationData& data, const PolyUpperPoint& z, const QuadratureConfig& cfg,
          Reduction reduction) {
  const EvalResult r = evaluate(data, z, cfg, reduction);
  if (!r.converged) throw QuadratureError("quadrature did not converge");
  return r.value;
}

cplx eval_convex_form(const RepresentationData& data, std::span<const double> k, const PolyUpperPoint& z,
                      const QuadratureConfig& cfg) {
  data.validate();
  cfg.validate();
  if (data.n() != 1) throw DomainError("eval_convex_form expects one-variable data");
  const std::vector<double> b = k_to_b(k);
  const std::size_t n = k.size();
  if (z.size() != n) throw DomainError("eval_convex_form: point has the wrong number of coordinates");
  const double beta = beta_n(b);

  cplx value = data.a;
  for (std::size_t l = 0; l < n; ++l) value += k[l] * data.b[0] * z[l];
  if (data.mu.is_zero()) return value;

  const QuadratureResult r = detail::run_nested([&](NestState& st) {
    std::vector<double> t(n, 0.0);
    // Integrates t_level..t_n, t_n innermost.
    std::function<cplx(std::size_t)> level = [&](std::size_t j) -> cplx {
      if (j == n) return eval_Ktilde0(z, t, b);
      return detail::nested_interval(
          [&](double x) {
            t[j] = x;
            return level(j + 1);
          },
          -kInf, kInf, cfg, st);
    };
    return detail::integrate_nested_1d(
        data.mu,
        [&](double t1) {
          t[0] = t1;
          return level(1);
        },
        cfg, st);
  });
  if (r.diverged) throw GrowthViolation("measure violates growth condition (numerically)");
  if (!r.converged) throw QuadratureError("quadrature did not converge");
  return value + beta * std::pow(kPi, -static_cast<double>(n)) * r.value;
}

HerglotzReport check_herglotz(const RepresentationData& data, std::size_t sample_count, std::uint64_t seed,
                              const QuadratureConfig& cfg, double tolerance) {
  data.validate();
  HerglotzReport rep;
  rep.tolerance = tolerance;
  rep.min_imag = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    const PolyUpperPoint z = rng.poly_upper_point(data.n());
    ++rep.samples;
    try {
      const double im = evaluate(data, z, cfg).value.imag();
      if (im < rep.min_imag) {
        rep.min_imag = im;
        rep.argmin.assign(z.coords().begin(), z.coords().end());
      }
    } catch (const QuadratureError&) {
      ++rep.failures;
    }
  }
  rep.passed = rep.failures == 0 && rep.min_imag >= -tolerance;
  return rep;
}

}  // namespace nvk
