#include "nvk/kernels.hpp"

#include <cmath>
#include <string>

#include "nvk/diagnostics.hpp"
#include "nvk/errors.hpp"

namespace nvk {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPoleProximity = 1e-12;

void check_upper(cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("point not in poly-upper half-plane");
}

void check_dims(const PolyUpperPoint& z, std::span<const double> t) {
  if (z.size() != t.size()) throw DomainError("kernel: dimensions of z and t differ");
  if (z.size() == 0) throw DomainError("kernel: empty point");
}

void warn_if_close(cplx z, double t) {
  if (std::abs(t - z) < kPoleProximity) warn("kernel evaluated within 1e-12 of a pole; result is ill-conditioned");
}

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PolyUpperPoint::PolyUpperPoint(std::vector<cplx> coords) : z_(std::move(coords)) {
  for (const cplx& zj : z_) check_upper(zj);
}

PolyUpperPoint::PolyUpperPoint(std::initializer_list<cplx> coords)
    : PolyUpperPoint(std::vector<cplx>(coords)) {}

PolyUpperPoint PolyUpperPoint::select(std::span<const std::size_t> axes) const {
  std::vector<cplx> out;
  out.reserve(axes.size());
  for (std::size_t a : axes) out.push_back(z_.at(a));
  return PolyUpperPoint(std::move(out));
}

void LadderKernelParams::validate() const {
  if (m < 1 || d < 0 || m + d < 2) throw DomainError("ladder kernel: need m >= 1, d >= 0, m + d >= 2");
  if (b.size() != static_cast<std::size_t>(m + d - 1)) {
    throw DomainError("ladder kernel: expected " + std::to_string(m + d - 1) + " coefficients b_j");
  }
  for (double bj : b) {
    if (!(bj > 0.0)) throw DomainError("ladder kernel: every b_j must be positive");
  }
}

double LadderKernelParams::F() const {
  double f = 1.0;
  for (int j = m; j <= m + d - 1; ++j) f += 1.0 / b[j - 1];
  return f;
}

double LadderKernelParams::T(std::span<const double> t) const {
  double s = F() * t[0];
  for (int j = 2; j <= m; ++j) s += t[j - 1];
  return s;
}

cplx LadderKernelParams::Z(const PolyUpperPoint& z) const {
  cplx s = z[m + d - 1];
  for (int j = m; j <= m + d - 1; ++j) s += z[j - 1] / b[j - 1];
  return s;
}

cplx eval_K1(cplx z, double t) {
  check_upper(z);
  warn_if_close(z, t);
  return 1.0 / (t - z) - t / (1.0 + t * t);
}

cplx eval_Kn_sum(const PolyUpperPoint& z, std::span<const double> t) {
  check_dims(z, t);
  const std::size_t n = z.size();
  cplx first{1.0, 0.0};
  cplx second{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    warn_if_close(z[j], t[j]);
    first *= 1.0 / (t[j] - z[j]) - 1.0 / (t[j] + kI);
    second *= 1.0 / (t[j] - kI) - 1.0 / (t[j] + kI);
  }
  const cplx scale = 1.0 / std::pow(2.0 * kI, static_cast<int>(n));
  return kI * (2.0 * scale * first - scale * second);
}

cplx eval_Kn_rational(const PolyUpperPoint& z, std::span<const double> t) {
  check_dims(z, t);
  const int n = static_cast<int>(z.size());
  cplx prod_tz_shift{1.0, 0.0};  // prod (t_j - i)(z_j + i)
  cplx prod_diff{1.0, 0.0};      // prod (t_j - z_j)
  double prod_real = 1.0;        // prod (t_j - i)(t_j + i) = prod (1 + t_j^2)
  for (int j = 0; j < n; ++j) {
    warn_if_close(z[j], t[j]);
    prod_tz_shift *= (t[j] - kI) * (z[j] + kI);
    prod_diff *= t[j] - z[j];
    prod_real *= 1.0 + t[j] * t[j];
  }
  const double two_pow = std::ldexp(1.0, n - 1);
  const cplx num = ipow(3 * n + 1) * prod_tz_shift - two_pow * kI * prod_diff;
  return num / (two_pow * prod_diff * prod_real);
}

cplx eval_Ktilde0(const PolyUpperPoint& z, std::span<const double> t, std::span<const double> b) {
  check_dims(z, t);
  const std::size_t n = t.size();
  if (n < 2 || b.size() != n - 1) throw DomainError("Ktilde0: expected n >= 2 and n - 1 coefficients");
  std::vector<double> s(n);
  double last = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(b[j] > 0.0)) throw DomainError("Ktilde0: every b_j must be positive");
    s[j] = t[0] - b[j] * t[j + 1];
  }
  for (double tj : t) last += tj;
  s[n - 1] = last;
  return eval_Kn_rational(z, s);
}

cplx eval_Ktilde_md(const PolyUpperPoint& z, std::span<const double> t,
                    const LadderKernelParams& params) {
  params.validate();
  const int m = params.m;
  if (z.size() != static_cast<std::size_t>(params.n())) throw DomainError("Ktilde_md: z must have m + d coordinates");
  if (t.size() != static_cast<std::size_t>(m)) throw DomainError("Ktilde_md: t must have m coordinates");
  const auto& b = params.b;

  cplx A{1.0, 0.0}, C{1.0, 0.0}, D{1.0, 0.0}, B{1.0, 0.0};
  for (int j = 2; j <= m; ++j) {
    const double s = t[0] - b[j - 2] * t[j - 1];
    A *= s - kI;
    C *= s - z[j - 2];
    D *= s + kI;
  }
  for (int j = 1; j <= m - 1; ++j) B *= z[j - 1] + kI;

  const double F = params.F();
  const double T = params.T(t);
  const cplx Z = params.Z(z);
  const cplx Fi = F * kI;
  const double two_pow = std::ldexp(1.0, m - 1);

  const cplx num = ipow(3 * m + 1) * A * (T - Fi) * B * (Z + Fi) - two_pow * Fi * C * (T - Z);
  const cplx den = two_pow * A * C * D * (T - Fi) * (T - Z) * (T + Fi);
  return num / den;
}

}  // namespace nvk
