#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nvk/kernels.hpp"
#include "nvk/measures.hpp"
#include "nvk/quadrature.hpp"

namespace nvk {

/// Data (a, b, mu) of q(z) = a + sum_l b_l z_l + pi^{-n} int K_n(z, t) dmu(t).
/// n is b.size(); mu lives on R^n.
struct RepresentationData {
  double a = 0.0;
  std::vector<double> b;
  Measure mu = Measure::zero(1);

  std::size_t n() const { return b.size(); }
  /// Throws DomainError unless n >= 1, a and b are finite, every b_l >= 0
  /// and mu has dimension n.
  void validate() const;
};

/// How ladder and padded measures are integrated.
enum class Reduction {
  /// Inner Lebesgue integrations are done in closed form; only the base
  /// measure is integrated numerically (exactly, if it is atomic).
  ClosedForm,
  /// Every axis is integrated by quadrature.
  Quadrature,
};

struct EvalResult {
  cplx value;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Evaluates q(z) and reports the quadrature outcome. Throws GrowthViolation
/// if the integral diverges and DomainError for bad input.
EvalResult evaluate(const RepresentationData& data, const PolyUpperPoint& z,
                    const QuadratureConfig& cfg = {}, Reduction reduction = Reduction::ClosedForm);

/// evaluate().value; additionally throws QuadratureError when the
/// quadrature did not reach the requested tolerance.
cplx eval(const RepresentationData& data, const PolyUpperPoint& z, const QuadratureConfig& cfg = {},
          Reduction reduction = Reduction::ClosedForm);

/// Evaluates a + sum k_l b z_l + (beta_n / pi^n) int int Ktilde_n^0 dt_n..dt_2 dmu(t_1)
/// for one-variable data, integrating t_2..t_n numerically. k must be
/// strictly positive and sum to 1.
cplx eval_convex_form(const RepresentationData& data, std::span<const double> k,
                      const PolyUpperPoint& z, const QuadratureConfig& cfg = {});

struct HerglotzReport {
  std::size_t samples = 0;
  double min_imag = 0.0;
  std::vector<cplx> argmin;
  double tolerance = 1e-10;
  /// Samples whose evaluation threw (divergence or quadrature failure).
  std::size_t failures = 0;
  bool passed = false;
};

/// Samples z with Re z_j uniform in [-10, 10] and Im z_j log-uniform in
/// [0.1, 10] and records the smallest Im q(z). passed iff min_imag >= -tolerance
/// and no sample failed.
HerglotzReport check_herglotz(const RepresentationData& data, std::size_t sample_count,
                              std::uint64_t seed, const QuadratureConfig& cfg = {},
                              double tolerance = 1e-10);

}  // namespace nvk
