#include "nvk/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nvk {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NVK_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::integer(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("Rng::integer: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

cplx Rng::upper_point(double re_max, double im_min, double im_max) {
  const double re = uniform(-re_max, re_max);
  const double im = std::exp(uniform(std::log(im_min), std::log(im_max)));
  return {re, im};
}

PolyUpperPoint Rng::poly_upper_point(std::size_t n, double re_max, double im_min, double im_max) {
  std::vector<cplx> z(n);
  for (auto& zj : z) zj = upper_point(re_max, im_min, im_max);
  return PolyUpperPoint(std::move(z));
}

std::vector<double> Rng::convex_weights(std::size_t n, double floor) {
  if (n == 0 || floor * static_cast<double>(n) >= 1.0) {
    throw std::invalid_argument("Rng::convex_weights: floor too large for n");
  }
  std::vector<double> w(n);
  for (auto& x : w) x = -std::log(1.0 - uniform());
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double free = 1.0 - floor * static_cast<double>(n);
  for (auto& x : w) x = floor + free * x / total;
  // Put the rounding residue on the largest entry so the sum is 1 to the ulp.
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  auto it = std::max_element(w.begin(), w.end());
  *it += 1.0 - sum;
  return w;
}

double halton(std::uint64_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace nvk
