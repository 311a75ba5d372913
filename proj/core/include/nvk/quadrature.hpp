#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nvk {

using cplx = std::complex<double>;

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  double divergence_threshold = 1e8;
  /// Off when absolute convergence is already known; skips the tail probe
  /// and the windowed scan.
  bool detect_divergence = true;

  /// Throws std::invalid_argument unless rel_tol > 0, abs_tol > 0 and
  /// max_subdivisions >= 1.
  void validate() const;
};

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = false;
  bool diverged = false;
};

using LineIntegrand = std::function<cplx(double)>;
using MultiIntegrand = std::function<cplx(std::span<const double>)>;

/// Integral over the whole real line. The line is compactified with
/// t = tan(theta) and integrated with a globally adaptive 7/15-point
/// Gauss-Kronrod pair; a half-line [c, inf) uses t = c + tan(theta) and a
/// finite interval is not mapped. A result whose error is down to the
/// roundoff floor of the integrand counts as converged. When the tail does
/// not decay, or the adaptive pass cannot converge, a windowed doubling test
/// decides whether the integral diverges.
///
/// Throws QuadratureError("integrand not finite") if f returns NaN or inf at a
/// node.
QuadratureResult integrate_line(const LineIntegrand& f, const QuadratureConfig& cfg = {});

/// Same machinery over [lo, hi]; either end may be infinite.
QuadratureResult integrate_interval(const LineIntegrand& f, double lo, double hi,
                                    const QuadratureConfig& cfg = {});

/// Iterated integral over R^k. `order` lists the axes innermost first, so
/// order[0] is integrated first and order.back() last. Axes are never
/// reordered. Inner divergence is reported as diverged on the result.
QuadratureResult integrate_iterated(const MultiIntegrand& f, std::span<const std::size_t> order,
                                    const QuadratureConfig& cfg = {});

/// Iterated integral over a box given by per-axis bounds (entries may be
/// infinite). bounds.size() must equal order.size().
QuadratureResult integrate_iterated(const MultiIntegrand& f, std::span<const std::size_t> order,
                                    std::span<const std::pair<double, double>> bounds,
                                    const QuadratureConfig& cfg = {});

namespace detail {

/// Thrown through nested integrations when an inner integral diverges; the
/// outermost entry point converts it into QuadratureResult::diverged.
struct DivergedSignal {};

/// Book-keeping shared by a stack of nested integrations.
struct NestState {
  bool converged = true;
  double error = 0.0;
  int depth = 0;
};

/// One level of a nested integration: integrates f over [lo, hi], throws
/// DivergedSignal on divergence, and folds the outcome into `state`. Inner
/// levels (depth > 1) drop the absolute tolerance, since an absolute error
/// per inner value would be integrated over a possibly unbounded outer range.
cplx nested_interval(const LineIntegrand& f, double lo, double hi, const QuadratureConfig& cfg,
                     NestState& state);

/// Integral over the whole line split at the given finite breakpoints
/// (sorted and deduplicated here). Used when the integrand's features sit
/// at known, possibly distant, locations.
cplx nested_line(const LineIntegrand& f, std::span<const double> breaks, const QuadratureConfig& cfg,
                 NestState& state);

/// Runs `body` as a top-level nested integration and packages the result.
QuadratureResult run_nested(const std::function<cplx(NestState&)>& body);

}  // namespace detail

}  // namespace nvk
