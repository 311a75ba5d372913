#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nvk/representation.hpp"

namespace nvk {

/// Convex weights k_1..k_n are passed as plain vectors: k_l >= 0 and
/// sum k_l = 1 within kSumTolerance. Ladder coefficients b_1..b_{n-1} are
/// plain vectors with every entry positive.
inline constexpr double kSumTolerance = 1e-12;
/// Weights at or below this are treated as exact zeros.
inline constexpr double kZeroWeight = 1e-15;

/// b_j = k_n / k_j. Throws DomainError (pointing at transform_general) if any
/// k_l <= kZeroWeight.
std::vector<double> k_to_b(std::span<const double> k);

/// k_l = prod b / (b_l beta_n), k_n = prod b / beta_n.
std::vector<double> b_to_k(std::span<const double> b);

/// beta_n = sum_j prod_{i != j} b_i + prod b_i.
double beta_n(std::span<const double> b);

/// Row j < n is e_1 - b_j e_{j+1}; the last row is all ones.
Eigen::MatrixXd build_Mn(std::span<const double> b);

/// One-variable data and strictly positive weights to n-variable data
/// (a, (k_1 b, ..., k_n b), ladder{mu, k_to_b(k), beta_n}).
RepresentationData transform(const RepresentationData& data, std::span<const double> k);

/// As transform(), allowing zero weights: the measure on the axes with
/// positive weight is padded with Lebesgue measure on the others.
RepresentationData transform_general(const RepresentationData& data, std::span<const double> k);

}  // namespace nvk
