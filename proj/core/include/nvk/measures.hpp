#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nvk/quadrature.hpp"

namespace nvk {

/// Closed interval; either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Axis-aligned closed box in R^k.
struct Box {
  std::vector<Interval> axes;

  Box() = default;
  explicit Box(std::vector<Interval> a);
  std::size_t dimension() const { return axes.size(); }
  bool contains(std::span<const double> x) const;
  /// Intersection, or nullopt when empty.
  std::optional<Box> intersect(const Box& other) const;
};

using BoxUnion = std::vector<Box>;

/// Nonnegative density on R^k. `expression` is kept for serialization and is
/// empty for densities built from arbitrary callables.
struct Density {
  std::function<double(std::span<const double>)> fn;
  std::string expression;
  bool unit = false;

  static Density one();
};

struct Atom {
  std::vector<double> location;
  double weight = 0.0;
};

class Measure;

struct AtomicMeasure;
struct LebesgueMeasure;
struct ProductMeasure;
struct Pushforward2DMeasure;
struct LadderMeasure;
struct PaddedMeasure;

/// Positive Borel measure on R^k built from a small algebra of variants.
/// Immutable; copies share structure.
class Measure {
 public:
  struct Node;

  /// Zero measure on R^k.
  static Measure zero(std::size_t dimension);
  static Measure atomic(std::size_t dimension, std::vector<Atom> atoms);
  /// weight * delta_x on R.
  static Measure dirac(double x, double weight = 1.0);
  /// Lebesgue measure on R^k.
  static Measure lebesgue(std::size_t dimension = 1);
  /// density(t) dt on R^k; `support` restricts integration when the density
  /// vanishes outside a known box.
  static Measure with_density(std::size_t dimension, Density density,
                              std::optional<Box> support = std::nullopt);
  /// Product of one-dimensional factors, factor j acting on axis j.
  static Measure product(std::vector<Measure> factors);
  /// U -> int ( int chi_U(alpha t1 + beta t2, gamma t1 + delta t2) dt2 ) dbase(t1).
  static Measure pushforward_2d(Measure base, double alpha, double beta, double gamma, double delta);
  /// U -> scale * int ( int chi_U(M_n t) dt_n ... dt_2 ) dbase(t1).
  static Measure ladder(Measure base, std::vector<double> b, double scale);
  /// Base measure on the listed axes of R^dimension with Lebesgue measure on
  /// the remaining axes; the Lebesgue axes are integrated innermost.
  static Measure padded(Measure base, std::vector<std::size_t> base_axes, std::size_t dimension);

  std::size_t dimension() const;
  const Node& node() const { return *node_; }

  template <class T>
  const T* as() const;

  /// True for an atomic measure without atoms.
  bool is_zero() const;

 private:
  explicit Measure(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct AtomicMeasure {
  std::size_t dimension = 1;
  std::vector<Atom> atoms;
};

struct LebesgueMeasure {
  std::size_t dimension = 1;
  Density density;
  std::optional<Box> support;
};

struct ProductMeasure {
  std::vector<Measure> factors;
};

struct Pushforward2DMeasure {
  Measure base;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

struct LadderMeasure {
  Measure base;
  std::vector<double> b;
  double scale = 1.0;
};

struct PaddedMeasure {
  Measure base;
  std::vector<std::size_t> base_axes;
  std::vector<std::size_t> lebesgue_axes;
  std::size_t dimension = 0;
};

struct Measure::Node {
  std::variant<AtomicMeasure, LebesgueMeasure, ProductMeasure, Pushforward2DMeasure, LadderMeasure,
               PaddedMeasure>
      v;
};

template <class T>
const T* Measure::as() const {
  return std::get_if<T>(&node_->v);
}

/// int f dmu. Atomic parts are summed exactly; Lebesgue parts are integrated
/// innermost-first in the order the measure prescribes. Divergence is
/// reported on the result, never thrown.
QuadratureResult integrate(const Measure& mu, const MultiIntegrand& f, const QuadratureConfig& cfg = {});

/// mu(U) for a finite union of closed boxes. Exact for atomic measures and for
/// Lebesgue measure with unit density; pushforwards use exact inner volumes.
QuadratureResult mass(const Measure& mu, const BoxUnion& U, const QuadratureConfig& cfg = {});

namespace detail {

/// Nested form of integrate(), for composing inside other integrations.
cplx integrate_nested(const Measure& mu, const MultiIntegrand& f, const QuadratureConfig& cfg,
                      NestState& state);

/// One-dimensional convenience wrapper around integrate_nested.
cplx integrate_nested_1d(const Measure& mu, const std::function<cplx(double)>& f,
                         const QuadratureConfig& cfg, NestState& state);

/// Multiplies the error contributed at the top nesting level by `factor`
/// for the lifetime of the guard.
class ErrorScale {
 public:
  ErrorScale(NestState& state, double factor);
  ~ErrorScale();
  ErrorScale(const ErrorScale&) = delete;
  ErrorScale& operator=(const ErrorScale&) = delete;

 private:
  NestState& state_;
  double start_;
  double factor_;
};

}  // namespace detail

}  // namespace nvk
