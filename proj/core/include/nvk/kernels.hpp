#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nvk {

using cplx = std::complex<double>;

/// A point of the poly-upper half-plane: every coordinate has strictly
/// positive imaginary part. Construction throws DomainError otherwise.
class PolyUpperPoint {
 public:
  explicit PolyUpperPoint(std::vector<cplx> coords);
  PolyUpperPoint(std::initializer_list<cplx> coords);

  std::size_t size() const { return z_.size(); }
  const cplx& operator[](std::size_t j) const { return z_[j]; }
  std::span<const cplx> coords() const { return z_; }

  /// The sub-point made of the listed coordinates, in the given order.
  PolyUpperPoint select(std::span<const std::size_t> axes) const;

 private:
  std::vector<cplx> z_;
};

/// Parameters of the general ladder kernel: m integration variables remain,
/// d have been integrated out, and b holds the n - 1 = m + d - 1 positive
/// ladder coefficients b_1..b_{n-1} (stored zero-based).
struct LadderKernelParams {
  int m = 2;
  int d = 0;
  std::vector<double> b;

  int n() const { return m + d; }
  /// Throws DomainError unless m >= 1, d >= 0, n >= 2, b.size() == n - 1 and
  /// every b_j > 0.
  void validate() const;
  /// F = 1 + sum_{j=m}^{m+d-1} 1/b_j.
  double F() const;
  /// T = F t_1 + t_2 + ... + t_m.
  double T(std::span<const double> t) const;
  /// Z = z_m/b_m + ... + z_{m+d-1}/b_{m+d-1} + z_{m+d}.
  cplx Z(const PolyUpperPoint& z) const;
};

/// K_1(z, t) = 1/(t - z) - t/(1 + t^2).
cplx eval_K1(cplx z, double t);

/// K_n from the difference-of-products form.
cplx eval_Kn_sum(const PolyUpperPoint& z, std::span<const double> t);

/// K_n from the single-fraction form. This is the form used elsewhere.
cplx eval_Kn_rational(const PolyUpperPoint& z, std::span<const double> t);

inline cplx eval_Kn(const PolyUpperPoint& z, std::span<const double> t) {
  return eval_Kn_rational(z, t);
}

/// K_n(z, M_n t) with M_n built from the ladder coefficients b.
cplx eval_Ktilde0(const PolyUpperPoint& z, std::span<const double> t, std::span<const double> b);

/// The ladder kernel with m remaining variables after d integrations;
/// z lives in C^{+(m+d)} and t in R^m.
cplx eval_Ktilde_md(const PolyUpperPoint& z, std::span<const double> t,
                    const LadderKernelParams& params);

}  // namespace nvk
