#include "nvk/ladder_verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "nvk/convex_transform.hpp"
#include "nvk/errors.hpp"
#include "nvk/residue_oracle.hpp"

namespace nvk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_n(std::span<const double> b, const PolyUpperPoint& z) {
  if (b.empty()) throw DomainError("ladder: need n >= 2");
  if (z.size() != b.size() + 1) throw DomainError("ladder: z must have n coordinates");
}

cplx checked(const QuadratureResult& r) {
  if (r.diverged) throw QuadratureError("ladder integral diverged");
  if (!r.converged) throw QuadratureError("ladder quadrature did not converge");
  return r.value;
}

cplx ktilde(int m, int d, std::span<const double> b, const PolyUpperPoint& z, std::span<const double> t) {
  LadderKernelParams p{m, d, std::vector<double>(b.begin(), b.end())};
  return eval_Ktilde_md(z, t, p);
}

cplx final_rhs(std::span<const double> b, const PolyUpperPoint& z, double t1) {
  const std::vector<double> k = b_to_k(b);
  cplx w;
  for (std::size_t l = 0; l < k.size(); ++l) w += k[l] * z[l];
  double prod = 1.0;
  for (std::size_t j = 1; j < b.size(); ++j) prod *= b[j];
  return kPi * prod / beta_n(b) * eval_K1(w, t1);
}

}  // namespace

double LhsRhs::rel_error() const { return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300); }

void LadderReport::add(const LhsRhs& s) {
  ++sample_count;
  max_rel_error = std::max(max_rel_error, s.rel_error());
  samples.emplace_back(s.lhs, s.rhs);
}

LhsRhs verify_step(int m, int d, std::span<const double> b, const PolyUpperPoint& z, std::span<const double> t,
                   const QuadratureConfig& cfg) {
  if (m < 3) throw DomainError("verify_step: need m >= 3");
  if (t.size() != static_cast<std::size_t>(m - 1)) throw DomainError("verify_step: t must have m - 1 entries");
  std::vector<double> full(t.begin(), t.end());
  full.push_back(0.0);
  LhsRhs out;
  out.lhs = checked(integrate_line(
      [&](double tm) {
        full.back() = tm;
        return ktilde(m, d, b, z, full);
      },
      cfg));
  out.rhs = kPi / b[static_cast<std::size_t>(m - 2)] * ktilde(m - 1, d + 1, b, z, t);
  return out;
}

LhsRhs verify_step_residue(int m, int d, std::span<const double> b, const PolyUpperPoint& z,
                           std::span<const double> t) {
  if (m < 2) throw DomainError("verify_step_residue: need m >= 2");
  LadderKernelParams p{m, d, std::vector<double>(b.begin(), b.end())};
  LhsRhs out;
  out.lhs = line_integral(ladder_integrand(z, t, p));
  out.rhs = m == 2 ? final_rhs(b, z, t[0]) : kPi / b[static_cast<std::size_t>(m - 2)] * ktilde(m - 1, d + 1, b, z, t);
  return out;
}

LhsRhs verify_final_step(std::span<const double> b, const PolyUpperPoint& z, double t1, const QuadratureConfig& cfg) {
  check_n(b, z);
  const int n = static_cast<int>(b.size()) + 1;
  LhsRhs out;
  out.lhs = checked(integrate_line(
      [&](double t2) {
        const double t[2] = {t1, t2};
        return ktilde(2, n - 2, b, z, std::span<const double>(t, 2));
      },
      cfg));
  out.rhs = final_rhs(b, z, t1);
  return out;
}

double rung_factor_product(std::span<const double> b) {
  // Rungs m = n..3 contribute pi / b_{m-1}; the last rung contributes
  // pi prod_{j=2}^{n-1} b_j / beta_n.
  double f = 1.0;
  for (std::size_t j = b.size(); j >= 2; --j) f *= kPi / b[j - 1];
  double prod = 1.0;
  for (std::size_t j = 1; j < b.size(); ++j) prod *= b[j];
  return f * kPi * prod / beta_n(b);
}

cplx final_argument(std::span<const double> b, const PolyUpperPoint& z) {
  const int n = static_cast<int>(b.size()) + 1;
  LadderKernelParams p{1, n - 1, std::vector<double>(b.begin(), b.end())};
  return p.Z(z) / p.F();
}

LhsRhs verify_full_reduction(std::span<const double> b, const PolyUpperPoint& z, double t1, ReductionPath path,
                             const QuadratureConfig& cfg) {
  check_n(b, z);
  const std::size_t n = b.size() + 1;
  LhsRhs out;
  const std::vector<double> k = b_to_k(b);
  cplx w;
  for (std::size_t l = 0; l < n; ++l) w += k[l] * z[l];
  out.rhs = std::pow(kPi, static_cast<double>(n - 1)) / beta_n(b) * eval_K1(w, t1);

  if (path == ReductionPath::RungByRung) {
    double f = 1.0;
    for (std::size_t j = b.size(); j >= 2; --j) f *= kPi / b[j - 1];
    out.lhs = f * verify_final_step(b, z, t1, cfg).lhs;
    return out;
  }

  std::vector<double> t(n, 0.0);
  t[0] = t1;
  out.lhs = checked(detail::run_nested([&](detail::NestState& st) {
    std::function<cplx(std::size_t)> level = [&](std::size_t j) -> cplx {
      if (j == n) return eval_Ktilde0(z, t, b);
      return detail::nested_interval(
          [&](double x) {
            t[j] = x;
            return level(j + 1);
          },
          -kInf, kInf, cfg, st);
    };
    return level(1);
  }));
  return out;
}

MainTheoremReport verify_main_theorem(const RepresentationData& data, std::span<const double> k,
                                      std::span<const PolyUpperPoint> zs, bool with_quadrature,
                                      const QuadratureConfig& cfg) {
  const bool strict = std::all_of(k.begin(), k.end(), [](double x) { return x > kZeroWeight; });
  const RepresentationData tr = strict ? transform(data, k) : transform_general(data, k);
  MainTheoremReport rep;
  if (with_quadrature) rep.max_dev_quadrature = 0.0;
  for (const PolyUpperPoint& z : zs) {
    cplx w;
    for (std::size_t l = 0; l < k.size(); ++l) w += k[l] * z[l];
    const cplx expected = eval(data, PolyUpperPoint({w}), cfg);
    const cplx closed = eval(tr, z, cfg, Reduction::ClosedForm);
    const double scale = std::max(1.0, std::abs(expected));
    rep.max_dev_closed_form = std::max(rep.max_dev_closed_form, std::abs(closed - expected) / scale);
    rep.closed_form_pairs.emplace_back(closed, expected);
    if (with_quadrature) {
      const cplx quad = eval(tr, z, cfg, Reduction::Quadrature);
      rep.max_dev_quadrature = std::max(rep.max_dev_quadrature, std::abs(quad - expected) / scale);
    }
    ++rep.samples;
  }
  return rep;
}

}  // namespace nvk
