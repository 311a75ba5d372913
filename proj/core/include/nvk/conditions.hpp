#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nvk/kernels.hpp"
#include "nvk/measures.hpp"
#include "nvk/quadrature.hpp"

namespace nvk {

/// Cases of the classification of two-variable pushforward measures.
enum class CaseLabel { i1, i2, ii1, ii2, iii1a, iii1b, iii2a, iii2b, NotRepresenting };

std::string_view to_string(CaseLabel label);

struct MeasureTraits {
  bool is_zero = false;
  bool is_finite = false;
  bool satisfies_1var_growth = false;
  /// Unset when the cubic condition was not evaluated.
  std::optional<bool> satisfies_cubic_condition;

  /// Throws DomainError unless is_zero => is_finite => satisfies_1var_growth.
  void validate() const;
};

enum class Verdict { Representing, NotRepresenting, Indeterminate };

std::string_view to_string(Verdict v);

struct Classification {
  /// The case selected by the signs of beta, delta, beta*delta and
  /// alpha*delta - beta*gamma (NotRepresenting when beta = delta = 0).
  CaseLabel structural_case = CaseLabel::NotRepresenting;
  Verdict verdict = Verdict::NotRepresenting;
  /// Which requirement on the base measure failed or was missing.
  std::string reason;

  /// structural_case when representing or indeterminate, else NotRepresenting.
  CaseLabel label() const;
};

Classification classify_pushforward2d(double alpha, double beta, double gamma, double delta,
                                      const MeasureTraits& traits);

/// int prod_j 1/(1 + t_j^2) dmu; diverged flags a numerical violation.
QuadratureResult check_growth(const Measure& mu, const QuadratureConfig& cfg = {});

/// A Nevanlinna-type integral together with the yardstick used to decide
/// whether it vanishes.
struct NevanlinnaValue {
  cplx value;
  /// int |integrand| dmu.
  double scale = 0.0;
  bool converged = false;
  bool diverged = false;
  /// |value| <= max(1e-8, 1e-6 * scale) with a finite, converged scale.
  /// Convergence of the signed integral is not required: integrals that
  /// vanish by cancellation usually stop at the roundoff limit.
  bool vanishes = false;
};

/// int dmu / ((t1 - z1)^2 (t2 - conj z2)^2) over a measure on R^2.
NevanlinnaValue check_nevanlinna_2var(const Measure& mu, cplx z1, cplx z2, const QuadratureConfig& cfg = {});

/// Sum over rho in {-1,0,1}^n containing both -1 and 1 of int prod_j N_{rho_j}(z_j, t_j) dmu.
NevanlinnaValue check_nevanlinna_nvar(const Measure& mu, const PolyUpperPoint& z,
                                      const QuadratureConfig& cfg = {});

/// Number of sign patterns in the n-variable sum: 3^n - 2 * 2^n + 1.
std::size_t nevanlinna_term_count(std::size_t n);

/// Default sample grid for "for all z" checks: `count` Halton points with
/// Re in [-10, 10] and Im in [0.1, 10] (log scale) on every coordinate.
/// `seed` offsets the Halton index.
std::vector<PolyUpperPoint> z_grid(std::size_t n, std::size_t count = 25, std::uint64_t seed = 0);

struct CubicCheck {
  bool holds = false;
  double max_modulus = 0.0;
  double scale = 0.0;
  bool quadrature_ok = true;
};

/// Evaluates int dmu1(t) / (det t - delta z1 + beta conj z2)^3 with
/// det = alpha delta - beta gamma on every grid point; holds iff each value
/// vanishes in the sense of NevanlinnaValue.
CubicCheck check_cubic_condition(double det, double delta, double beta, const Measure& mu1,
                                 std::span<const PolyUpperPoint> zs, const QuadratureConfig& cfg = {});

/// Traits of a one-dimensional base measure from numerics: zero, finite
/// total mass, one-variable growth and, when the coefficients call for it,
/// the cubic condition on z_grid(2).
MeasureTraits infer_traits(const Measure& mu1, double alpha, double beta, double gamma, double delta,
                           const QuadratureConfig& cfg = {});

/// Numerical evidence for a two-variable pushforward measure.
struct ClassificationEvidence {
  QuadratureResult growth;
  /// Largest |Nevanlinna integral| over the grid (inf if any diverged).
  double max_nevanlinna_modulus = 0.0;
  /// Largest |Nevanlinna integral| / int |integrand| over the grid (0 when
  /// both vanish, inf on divergence).
  double max_nevanlinna_ratio = 0.0;
  bool growth_converges() const { return growth.converged && !growth.diverged; }
};

ClassificationEvidence gather_evidence(const Measure& pushforward, std::span<const PolyUpperPoint> grid,
                                       const QuadratureConfig& cfg = {});

struct ClassifyOutcome {
  MeasureTraits traits;
  Classification classification;
  ClassificationEvidence evidence;
};

/// Infers traits of mu1, classifies, and gathers evidence on z_grid(2).
ClassifyOutcome classify_measure(double alpha, double beta, double gamma, double delta, const Measure& mu1,
                                 const QuadratureConfig& cfg = {});

/// Reference fixtures, one per case plus negative examples.
struct ClassificationFixture {
  std::string name;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
  Measure base = Measure::zero(1);
  std::string base_label;
  CaseLabel expected = CaseLabel::NotRepresenting;
  bool representing = false;
};

std::vector<ClassificationFixture> classification_fixtures();

}  // namespace nvk
