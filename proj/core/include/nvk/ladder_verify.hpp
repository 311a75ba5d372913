#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nvk/kernels.hpp"
#include "nvk/quadrature.hpp"
#include "nvk/representation.hpp"

namespace nvk {

struct LhsRhs {
  cplx lhs;
  cplx rhs;
  double rel_error() const;
};

struct LadderReport {
  int m = 0;
  int d = 0;
  std::size_t sample_count = 0;
  double max_rel_error = 0.0;
  std::vector<std::pair<cplx, cplx>> samples;

  void add(const LhsRhs& s);
};

/// int Ktilde_m^d(z, (t, t_m)) dt_m by quadrature (lhs) against
/// (pi / b_{m-1}) Ktilde_{m-1}^{d+1}(z, t) (rhs). Requires m >= 3 and t of
/// length m - 1. Throws QuadratureError if the quadrature fails.
LhsRhs verify_step(int m, int d, std::span<const double> b, const PolyUpperPoint& z,
                   std::span<const double> t, const QuadratureConfig& cfg = {});

/// Same identity with the lhs from the residue oracle instead of quadrature
/// (m >= 2; for m = 2 the rhs is the final-step closed form).
LhsRhs verify_step_residue(int m, int d, std::span<const double> b, const PolyUpperPoint& z,
                           std::span<const double> t);

/// int Ktilde_2^{n-2}(z, (t1, t2)) dt2 against
/// pi (prod_{j>=2} b_j / beta_n) K_1(sum k z, t1).
LhsRhs verify_final_step(std::span<const double> b, const PolyUpperPoint& z, double t1,
                         const QuadratureConfig& cfg = {});

enum class ReductionPath {
  /// Full (n-1)-dimensional iterated quadrature of Ktilde_n^0.
  Iterated,
  /// Closed-form rung factors times the quadrature of the last rung.
  RungByRung,
};

/// int_{R^{n-1}} Ktilde_n^0 dt_n..dt_2 against (pi^{n-1} / beta_n) K_1(sum k z, t1).
LhsRhs verify_full_reduction(std::span<const double> b, const PolyUpperPoint& z, double t1,
                             ReductionPath path, const QuadratureConfig& cfg = {});

/// Product of the rung factors (pi / b_{n-1}) ... (pi / b_2) (pi prod_{j>=2} b_j / beta_n).
double rung_factor_product(std::span<const double> b);

/// Z_1^{n-1} / F_1^{n-1}, to be compared with sum k z.
cplx final_argument(std::span<const double> b, const PolyUpperPoint& z);

struct MainTheoremReport {
  std::size_t samples = 0;
  double max_dev_closed_form = 0.0;
  /// Negative when the quadrature path was not run.
  double max_dev_quadrature = -1.0;
  std::vector<std::pair<cplx, cplx>> closed_form_pairs;
};

/// Compares eval(transform(data, k), z) with q(sum k z) at every z. k with
/// zero entries goes through transform_general.
MainTheoremReport verify_main_theorem(const RepresentationData& data, std::span<const double> k,
                                      std::span<const PolyUpperPoint> zs, bool with_quadrature,
                                      const QuadratureConfig& cfg = {});

}  // namespace nvk
