#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "nvk/kernels.hpp"

namespace nvk {

/// Polynomial with complex coefficients in ascending degree. Trailing exact
/// zeros are trimmed, so the leading coefficient is nonzero unless the
/// polynomial is zero.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs);
  ComplexPolynomial(std::initializer_list<cplx> coeffs);

  /// prod (tau - r) over the given roots.
  static ComplexPolynomial from_roots(std::span<const cplx> roots);
  /// c0 + c1 tau.
  static ComplexPolynomial linear(cplx c0, cplx c1) { return ComplexPolynomial({c0, c1}); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const cplx> coeffs() const { return c_; }
  cplx operator[](std::size_t j) const { return j < c_.size() ? c_[j] : cplx{}; }
  cplx operator()(cplx tau) const;
  ComplexPolynomial derivative() const;
  /// Coefficients of p(p0 + u) in powers of u.
  ComplexPolynomial shifted(cplx p0) const;
  /// Roots from the eigenvalues of the companion matrix (no multiplicity
  /// grouping). Empty for degree <= 0.
  std::vector<cplx> roots() const;
  /// Quotient and remainder of division by `divisor`.
  std::pair<ComplexPolynomial, ComplexPolynomial> divmod(const ComplexPolynomial& divisor) const;
  double max_abs_coeff() const;

  friend ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b);
  friend ComplexPolynomial operator-(const ComplexPolynomial& a, const ComplexPolynomial& b);
  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b);
  friend ComplexPolynomial operator*(cplx s, const ComplexPolynomial& a);

 private:
  void trim();
  std::vector<cplx> c_;
};

/// num / den; den must not be the zero polynomial.
struct RationalFunction {
  ComplexPolynomial num;
  ComplexPolynomial den{cplx{1.0, 0.0}};

  RationalFunction() = default;
  RationalFunction(ComplexPolynomial n, ComplexPolynomial d);
  cplx operator()(cplx tau) const { return num(tau) / den(tau); }
};

struct Pole {
  cplx location;
  int multiplicity = 1;
};

/// Tolerance for grouping denominator roots into one multiple pole.
inline constexpr double kPoleClusterTol = 1e-9;
/// Numerator and denominator roots closer than this cancel.
inline constexpr double kCommonRootTol = 1e-10;

/// Cancels common roots of num and den (within kCommonRootTol).
RationalFunction reduce(const RationalFunction& f);

/// Poles of f (after reduce()) with multiplicities.
std::vector<Pole> find_poles(const RationalFunction& f);

/// Residue of f at `pole` of the stated multiplicity. Throws
/// std::domain_error("residue: inconsistent multiplicity") if den does not
/// vanish to exactly that order at the pole.
cplx residue_at(const RationalFunction& f, cplx pole, int multiplicity);

/// When all poles lie in one half-plane, value and lower_value are exactly
/// zero and discrepancy is that of the residue sum on the other side.
struct LineIntegral {
  cplx value;        // 2 pi i * sum of upper-half-plane residues
  cplx lower_value;  // -2 pi i * sum of lower-half-plane residues
  double discrepancy = 0.0;
};

/// int_R f(t) dt for deg den >= deg num + 2 without real poles.
/// Throws std::domain_error("arc contribution nonzero") on the degree
/// condition, std::domain_error("real pole") for a pole on the line, and
/// std::runtime_error if, with poles on both sides, the two half-plane sums
/// disagree beyond 1e-10.
LineIntegral line_integral_detail(const RationalFunction& f);
cplx line_integral(const RationalFunction& f);

/// Inner growth integrand in tau = t_2 for the two-variable pushforward:
/// 1 / ((1 + (alpha t1 + beta tau)^2) (1 + (gamma t1 + delta tau)^2)).
RationalFunction growth_auxiliary(double alpha, double beta, double gamma, double delta, double t1);

/// Inner Nevanlinna integrand in tau = t_2:
/// 1 / ((alpha t1 + beta tau - z1)^2 (gamma t1 + delta tau - conj z2)^2).
RationalFunction nevanlinna_auxiliary(double alpha, double beta, double gamma, double delta, double t1,
                                      cplx z1, cplx z2);

/// The ladder kernel as a rational function of its last variable t_m, with
/// t_1..t_{m-1} fixed (t_fixed has m - 1 entries). Requires m >= 2.
RationalFunction ladder_integrand(const PolyUpperPoint& z, std::span<const double> t_fixed,
                                  const LadderKernelParams& params);

}  // namespace nvk
