#include "nvk/convex_transform.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "nvk/errors.hpp"

namespace nvk {

namespace {

void check_weights(std::span<const double> k) {
  if (k.empty()) throw DomainError("convex weights: empty");
  double sum = 0.0;
  for (double kl : k) {
    if (!std::isfinite(kl) || kl < 0.0) throw DomainError("convex weights must be nonnegative");
    sum += kl;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DomainError("convex weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

void check_ladder(std::span<const double> b) {
  if (b.empty()) throw DomainError("ladder coefficients: need n >= 2");
  for (double bj : b) {
    if (!(bj > 0.0) || !std::isfinite(bj)) throw DomainError("ladder coefficients must be positive");
  }
}

void check_one_variable(const RepresentationData& data) {
  data.validate();
  if (data.n() != 1) throw DomainError("convex transform expects one-variable data");
}

}  // namespace

std::vector<double> k_to_b(std::span<const double> k) {
  check_weights(k);
  if (k.size() < 2) throw DomainError("k_to_b: need n >= 2");
  for (double kl : k) {
    if (kl <= kZeroWeight) {
      throw DomainError("k_to_b: zero weight; use transform_general for weights with zeros");
    }
  }
  std::vector<double> b(k.size() - 1);
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = k.back() / k[j];
  return b;
}

std::vector<double> b_to_k(std::span<const double> b) {
  check_ladder(b);
  // prod b / beta_n = 1 / (1 + sum 1/b_j); avoids forming the products.
  double F = 1.0;
  for (double bj : b) F += 1.0 / bj;
  std::vector<double> k(b.size() + 1);
  for (std::size_t j = 0; j < b.size(); ++j) k[j] = 1.0 / (b[j] * F);
  k.back() = 1.0 / F;
  return k;
}

double beta_n(std::span<const double> b) {
  check_ladder(b);
  double total = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    double p = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i != j) p *= b[i];
    }
    total += p;
  }
  return total + std::accumulate(b.begin(), b.end(), 1.0, std::multiplies<>());
}

Eigen::MatrixXd build_Mn(std::span<const double> b) {
  check_ladder(b);
  const Eigen::Index n = static_cast<Eigen::Index>(b.size()) + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    M(j, 0) = 1.0;
    M(j, j + 1) = -b[static_cast<std::size_t>(j)];
  }
  M.row(n - 1).setOnes();
  return M;
}

RepresentationData transform(const RepresentationData& data, std::span<const double> k) {
  check_one_variable(data);
  std::vector<double> b = k_to_b(k);
  const double beta = beta_n(b);
  RepresentationData out;
  out.a = data.a;
  out.b.resize(k.size());
  for (std::size_t l = 0; l < k.size(); ++l) out.b[l] = k[l] * data.b[0];
  out.mu = data.mu.is_zero() ? Measure::zero(k.size()) : Measure::ladder(data.mu, std::move(b), beta);
  return out;
}

RepresentationData transform_general(const RepresentationData& data, std::span<const double> k) {
  check_one_variable(data);
  check_weights(k);
  const std::size_t n = k.size();
  std::vector<std::size_t> S;
  std::vector<double> kS;
  for (std::size_t l = 0; l < n; ++l) {
    if (k[l] > kZeroWeight) {
      S.push_back(l);
      kS.push_back(k[l]);
    }
  }
  if (S.empty()) throw DomainError("transform_general: all weights are zero");
  if (S.size() == n) return transform(data, k);

  RepresentationData out;
  out.a = data.a;
  out.b.assign(n, 0.0);
  for (std::size_t l : S) out.b[l] = k[l] * data.b[0];
  if (data.mu.is_zero()) {
    out.mu = Measure::zero(n);
    return out;
  }
  Measure inner = data.mu;
  if (S.size() >= 2) {
    // Renormalise away the zeros dropped from the sum.
    const double sum = std::accumulate(kS.begin(), kS.end(), 0.0);
    for (double& x : kS) x /= sum;
    inner = transform(data, kS).mu;
  }
  out.mu = Measure::padded(std::move(inner), std::move(S), n);
  return out;
}

}  // namespace nvk
