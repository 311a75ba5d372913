#include "nvk/residue_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "nvk/errors.hpp"

namespace nvk {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Size of p near tau, used to judge whether p(tau) is "zero".
double magnitude_at(const ComplexPolynomial& p, cplx tau) {
  double s = 0.0;
  double r = 1.0;
  for (const cplx& c : p.coeffs()) {
    s += std::abs(c) * r;
    r *= std::abs(tau);
  }
  return s;
}

// Repeated roots come out of the eigen-solver as a small cluster. Groups
// roots within `tol` (relative) of each other and returns centroids with
// counts.
std::vector<Pole> cluster(const std::vector<cplx>& roots, double tol) {
  std::vector<Pole> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= tol * (1.0 + std::abs(roots[i]))) {
        used[j] = true;
        sum += roots[j];
        ++count;
      }
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

// Remainder of p / (tau - c)^m relative to p, small iff c is an m-fold root.
double deflation_residual(const ComplexPolynomial& p, cplx c, int m) {
  const std::vector<cplx> r(static_cast<std::size_t>(m), c);
  const auto [q, rem] = p.divmod(ComplexPolynomial::from_roots(r));
  (void)q;
  return rem.max_abs_coeff() / std::max(p.max_abs_coeff(), 1e-300);
}

std::vector<Pole> group_roots(const ComplexPolynomial& den) {
  std::vector<Pole> poles = cluster(den.roots(), kPoleClusterTol);
  // Multiple roots split by roughly eps^(1/m); merge nearby clusters whose
  // combined centroid deflates the denominator cleanly.
  bool merged = true;
  while (merged) {
    merged = false;
    for (double loose : {1e-6, 1e-4, 1e-3}) {
      for (std::size_t i = 0; i < poles.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < poles.size() && !merged; ++j) {
          const cplx a = poles[i].location;
          const cplx b = poles[j].location;
          if (std::abs(a - b) > loose * (1.0 + std::abs(a))) continue;
          const int m = poles[i].multiplicity + poles[j].multiplicity;
          const cplx c = (a * static_cast<double>(poles[i].multiplicity) +
                          b * static_cast<double>(poles[j].multiplicity)) /
                         static_cast<double>(m);
          if (deflation_residual(den, c, m) < 1e-9) {
            poles[i] = {c, m};
            poles.erase(poles.begin() + static_cast<std::ptrdiff_t>(j));
            merged = true;
          }
        }
      }
      if (merged) break;
    }
  }
  // A root of multiplicity m is a simple root of the (m-1)th derivative.
  for (Pole& p : poles) {
    ComplexPolynomial g = den;
    for (int k = 1; k < p.multiplicity; ++k) g = g.derivative();
    const ComplexPolynomial dg = g.derivative();
    cplx x = p.location;
    // Stop once the steps no longer shrink: beyond that point they are
    // roundoff noise in the evaluation of g.
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 20; ++it) {
      const cplx d = dg(x);
      if (d == cplx{}) break;
      const cplx step = g(x) / d;
      const double size = std::abs(step);
      if (!std::isfinite(size) || size >= 0.5 * last) break;
      x -= step;
      last = size;
    }
    // Keep the polished root only if Newton settled near the cluster centre.
    if (last <= 1e-6 * (1.0 + std::abs(p.location)) && std::abs(x - p.location) <= 1e-4 * (1.0 + std::abs(p.location))) {
      p.location = x;
    }
  }
  return poles;
}

}  // namespace

ComplexPolynomial::ComplexPolynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

ComplexPolynomial::ComplexPolynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

void ComplexPolynomial::trim() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

ComplexPolynomial ComplexPolynomial::from_roots(std::span<const cplx> roots) {
  ComplexPolynomial p({cplx{1.0, 0.0}});
  for (const cplx& r : roots) p = p * linear(-r, 1.0);
  return p;
}

cplx ComplexPolynomial::operator()(cplx tau) const {
  cplx v;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * tau + *it;
  return v;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t j = 1; j < c_.size(); ++j) d[j - 1] = static_cast<double>(j) * c_[j];
  return ComplexPolynomial(std::move(d));
}

ComplexPolynomial ComplexPolynomial::shifted(cplx p0) const {
  // Taylor shift by repeated synthetic division.
  std::vector<cplx> a = c_;
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = n - 1; j > k; --j) a[j - 1] += p0 * a[j];
  }
  return ComplexPolynomial(std::move(a));
}

std::vector<cplx> ComplexPolynomial::roots() const {
  const int d = degree();
  if (d <= 0) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  const cplx lead = c_.back();
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -c_[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C, false);
  std::vector<cplx> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

std::pair<ComplexPolynomial, ComplexPolynomial> ComplexPolynomial::divmod(
    const ComplexPolynomial& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<cplx> rem = c_;
  const int dd = divisor.degree();
  if (degree() < dd) return {ComplexPolynomial(), *this};
  std::vector<cplx> quot(static_cast<std::size_t>(degree() - dd + 1));
  const cplx lead = divisor.c_.back();
  for (int k = degree() - dd; k >= 0; --k) {
    const cplx q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * divisor.c_[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {ComplexPolynomial(std::move(quot)), ComplexPolynomial(std::move(rem))};
}

double ComplexPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : c_) m = std::max(m, std::abs(c));
  return m;
}

ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = a[j] + b[j];
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial operator-(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  return a + cplx{-1.0, 0.0} * b;
}

ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return ComplexPolynomial(std::move(c));
}

ComplexPolynomial operator*(cplx s, const ComplexPolynomial& a) {
  std::vector<cplx> c = a.c_;
  for (auto& x : c) x *= s;
  return ComplexPolynomial(std::move(c));
}

RationalFunction::RationalFunction(ComplexPolynomial n, ComplexPolynomial d)
    : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw std::domain_error("rational function: zero denominator");
}

RationalFunction reduce(const RationalFunction& f) {
  if (f.num.degree() <= 0 || f.den.degree() <= 0) return f;
  RationalFunction g = f;
  std::vector<cplx> num_roots = g.num.roots();
  const std::vector<cplx> den_roots = g.den.roots();
  for (const cplx& r : den_roots) {
    auto it = std::find_if(num_roots.begin(), num_roots.end(), [&](const cplx& s) {
      return std::abs(s - r) <= kCommonRootTol * (1.0 + std::abs(r));
    });
    if (it == num_roots.end()) continue;
    const cplx c = 0.5 * (*it + r);
    num_roots.erase(it);
    g.num = g.num.divmod(ComplexPolynomial::linear(-c, 1.0)).first;
    g.den = g.den.divmod(ComplexPolynomial::linear(-c, 1.0)).first;
  }
  return g;
}

std::vector<Pole> find_poles(const RationalFunction& f) {
  return group_roots(reduce(f).den);
}

cplx residue_at(const RationalFunction& f, cplx pole, int multiplicity) {
  if (multiplicity < 1) throw std::domain_error("residue: multiplicity must be >= 1");
  const std::vector<cplx> rep(static_cast<std::size_t>(multiplicity), pole);
  const auto [h, rem] = f.den.divmod(ComplexPolynomial::from_roots(rep));
  const double scale = magnitude_at(f.den, pole);
  const double reach = std::pow(1.0 + std::abs(pole), f.den.degree());
  if (rem.max_abs_coeff() * reach > 1e-7 * std::max(scale, 1e-300) ||
      std::abs(h(pole)) <= 1e-9 * magnitude_at(h, pole)) {
    throw std::domain_error("residue: inconsistent multiplicity");
  }
  // Coefficient of u^{m-1} in num(p+u)/h(p+u), by power-series division.
  const ComplexPolynomial a = f.num.shifted(pole);
  const ComplexPolynomial b = h.shifted(pole);
  const std::size_t m = static_cast<std::size_t>(multiplicity);
  std::vector<cplx> q(m);
  for (std::size_t k = 0; k < m; ++k) {
    cplx s = a[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
    q[k] = s / b[0];
  }
  return q[m - 1];
}

LineIntegral line_integral_detail(const RationalFunction& f) {
  const RationalFunction g = reduce(f);
  if (g.num.is_zero()) return {};
  if (g.den.degree() < g.num.degree() + 2) throw std::domain_error("arc contribution nonzero");
  const std::vector<Pole> poles = group_roots(g.den);
  const cplx two_pi_i{0.0, 2.0 * std::numbers::pi};
  cplx upper;
  cplx lower;
  double size = 0.0;
  bool any_upper = false;
  bool any_lower = false;
  for (const Pole& p : poles) {
    if (std::abs(p.location.imag()) <= 1e-12 * (1.0 + std::abs(p.location))) {
      throw std::domain_error("real pole");
    }
    const cplx r = residue_at(g, p.location, p.multiplicity);
    size += std::abs(r);
    if (p.location.imag() > 0.0) {
      upper += r;
      any_upper = true;
    } else {
      lower += r;
      any_lower = true;
    }
  }
  LineIntegral out;
  out.value = two_pi_i * upper;
  out.lower_value = -two_pi_i * lower;
  // Closing the contour on a side without poles gives exactly zero. The
  // residue sum on the other side is kept as a diagnostic only: close
  // higher-order poles leave it at roundoff scaled by the residue sizes.
  if (!any_upper || !any_lower) {
    out.discrepancy = std::abs(out.value - out.lower_value);
    out.value = out.lower_value = cplx{};
    return out;
  }
  out.discrepancy = std::abs(out.value - out.lower_value);
  if (out.discrepancy > 1e-10 * std::max({1.0, std::abs(out.value), 2.0 * std::numbers::pi * size})) {
    throw std::runtime_error("residue sums of the two half-planes disagree");
  }
  return out;
}

cplx line_integral(const RationalFunction& f) { return line_integral_detail(f).value; }

RationalFunction growth_auxiliary(double alpha, double beta, double gamma, double delta, double t1) {
  const ComplexPolynomial u = ComplexPolynomial::linear(alpha * t1, beta);
  const ComplexPolynomial v = ComplexPolynomial::linear(gamma * t1, delta);
  const ComplexPolynomial one({cplx{1.0, 0.0}});
  return {one, (one + u * u) * (one + v * v)};
}

RationalFunction nevanlinna_auxiliary(double alpha, double beta, double gamma, double delta, double t1,
                                      cplx z1, cplx z2) {
  const ComplexPolynomial u = ComplexPolynomial::linear(alpha * t1 - z1, beta);
  const ComplexPolynomial v = ComplexPolynomial::linear(gamma * t1 - std::conj(z2), delta);
  return {ComplexPolynomial({cplx{1.0, 0.0}}), u * u * v * v};
}

RationalFunction ladder_integrand(const PolyUpperPoint& z, std::span<const double> t_fixed,
                                  const LadderKernelParams& params) {
  params.validate();
  const int m = params.m;
  if (m < 2) throw DomainError("ladder_integrand: need m >= 2");
  if (t_fixed.size() != static_cast<std::size_t>(m - 1)) throw DomainError("ladder_integrand: need m - 1 fixed coordinates");
  if (z.size() != static_cast<std::size_t>(params.n())) throw DomainError("ladder_integrand: z must have m + d coordinates");
  const auto& b = params.b;
  const ComplexPolynomial one({cplx{1.0, 0.0}});

  // s_j = t_1 - b_{j-1} t_j; only s_m depends on tau = t_m.
  ComplexPolynomial A = one, C = one, D = one;
  for (int j = 2; j <= m; ++j) {
    const ComplexPolynomial s = j < m ? ComplexPolynomial({cplx(t_fixed[0] - b[j - 2] * t_fixed[j - 1])})
                                      : ComplexPolynomial::linear(t_fixed[0], -b[j - 2]);
    A = A * (s - ComplexPolynomial({kI}));
    C = C * (s - ComplexPolynomial({z[j - 2]}));
    D = D * (s + ComplexPolynomial({kI}));
  }
  cplx B{1.0, 0.0};
  for (int j = 1; j <= m - 1; ++j) B *= z[j - 1] + kI;

  const double F = params.F();
  double T0 = F * t_fixed[0];
  for (int j = 2; j <= m - 1; ++j) T0 += t_fixed[j - 1];
  const ComplexPolynomial T = ComplexPolynomial::linear(T0, 1.0);
  const cplx Z = params.Z(z);
  const cplx Fi = F * kI;
  const double two_pow = std::ldexp(1.0, m - 1);

  const ComplexPolynomial num = (ipow(3 * m + 1) * B * (Z + Fi)) * (A * (T - ComplexPolynomial({Fi}))) -
                                (two_pow * Fi) * (C * (T - ComplexPolynomial({Z})));
  const ComplexPolynomial den = cplx(two_pow) * (A * C * D * (T - ComplexPolynomial({Fi})) *
                                                 (T - ComplexPolynomial({Z})) * (T + ComplexPolynomial({Fi})));
  return {num, den};
}

}  // namespace nvk
