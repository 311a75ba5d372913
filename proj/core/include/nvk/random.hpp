#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nvk/kernels.hpp"

namespace nvk {

/// Seed used when neither NVK_SEED nor an explicit seed is given.
inline constexpr std::uint64_t kDefaultSeed = 0x6e766b31;

/// NVK_SEED from the environment if set and parseable, else kDefaultSeed.
std::uint64_t default_seed();

/// Portable pseudo-random source: mt19937_64 plus hand-rolled
/// distributions, so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = default_seed()) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  /// Point with Re in [-re_max, re_max] and Im log-uniform in [im_min, im_max].
  cplx upper_point(double re_max = 10.0, double im_min = 0.1, double im_max = 10.0);
  PolyUpperPoint poly_upper_point(std::size_t n, double re_max = 10.0, double im_min = 0.1,
                                  double im_max = 10.0);
  /// Strictly positive convex weights of length n, each at least `floor`.
  std::vector<double> convex_weights(std::size_t n, double floor = 0.05);

 private:
  std::mt19937_64 engine_;
};

/// Radical inverse of `index` in the given prime base (Halton coordinate).
double halton(std::uint64_t index, unsigned base);

}  // namespace nvk
