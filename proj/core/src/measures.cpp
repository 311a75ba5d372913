#include "nvk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nvk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::DivergedSignal;
using detail::NestState;

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("measure: " + what);
}

}  // namespace

Box::Box(std::vector<Interval> a) : axes(std::move(a)) {
  for (const auto& iv : axes) {
    require(!std::isnan(iv.lo) && !std::isnan(iv.hi) && iv.lo <= iv.hi, "box needs lo <= hi on every axis");
  }
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != axes.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!axes[j].contains(x[j])) return false;
  }
  return true;
}

std::optional<Box> Box::intersect(const Box& other) const {
  require(other.dimension() == dimension(), "box dimensions differ");
  std::vector<Interval> out(axes.size());
  for (std::size_t j = 0; j < axes.size(); ++j) {
    out[j] = {std::max(axes[j].lo, other.axes[j].lo), std::min(axes[j].hi, other.axes[j].hi)};
    if (out[j].lo > out[j].hi) return std::nullopt;
  }
  return Box(std::move(out));
}

Density Density::one() {
  Density d;
  d.fn = [](std::span<const double>) { return 1.0; };
  d.expression = "1";
  d.unit = true;
  return d;
}

// ---------------------------------------------------------------------------
// construction

Measure Measure::zero(std::size_t dimension) { return atomic(dimension, {}); }

Measure Measure::atomic(std::size_t dimension, std::vector<Atom> atoms) {
  require(dimension >= 1, "dimension must be at least 1");
  for (const auto& a : atoms) {
    require(a.location.size() == dimension, "atom location has wrong dimension");
    require(a.weight > 0.0 && std::isfinite(a.weight), "atomic weights must be strictly positive");
    for (double x : a.location) require(std::isfinite(x), "atom location must be finite");
  }
  return Measure(std::make_shared<const Node>(Node{AtomicMeasure{dimension, std::move(atoms)}}));
}

Measure Measure::dirac(double x, double weight) { return atomic(1, {Atom{{x}, weight}}); }

Measure Measure::lebesgue(std::size_t dimension) { return with_density(dimension, Density::one()); }

Measure Measure::with_density(std::size_t dimension, Density density, std::optional<Box> support) {
  require(dimension >= 1, "dimension must be at least 1");
  require(static_cast<bool>(density.fn), "density function is empty");
  if (support) require(support->dimension() == dimension, "support box has wrong dimension");
  return Measure(std::make_shared<const Node>(
      Node{LebesgueMeasure{dimension, std::move(density), std::move(support)}}));
}

Measure Measure::product(std::vector<Measure> factors) {
  require(!factors.empty(), "product needs at least one factor");
  for (const auto& f : factors) require(f.dimension() == 1, "product factors must be one-dimensional");
  return Measure(std::make_shared<const Node>(Node{ProductMeasure{std::move(factors)}}));
}

Measure Measure::pushforward_2d(Measure base, double alpha, double beta, double gamma, double delta) {
  require(base.dimension() == 1, "pushforward base must be one-dimensional");
  for (double c : {alpha, beta, gamma, delta}) require(std::isfinite(c), "pushforward coefficients must be finite");
  return Measure(std::make_shared<const Node>(
      Node{Pushforward2DMeasure{std::move(base), alpha, beta, gamma, delta}}));
}

Measure Measure::ladder(Measure base, std::vector<double> b, double scale) {
  require(base.dimension() == 1, "ladder base must be one-dimensional");
  require(!b.empty(), "ladder needs at least one coefficient");
  for (double bj : b) require(bj > 0.0 && std::isfinite(bj), "ladder coefficients must be positive");
  require(scale > 0.0 && std::isfinite(scale), "ladder scale must be positive");
  return Measure(std::make_shared<const Node>(Node{LadderMeasure{std::move(base), std::move(b), scale}}));
}

Measure Measure::padded(Measure base, std::vector<std::size_t> base_axes, std::size_t dimension) {
  require(base.dimension() == base_axes.size(), "padded base dimension must match its axis list");
  require(base_axes.size() < dimension, "padding needs at least one Lebesgue axis");
  std::vector<bool> used(dimension, false);
  for (std::size_t a : base_axes) {
    require(a < dimension && !used[a], "padded axes must be distinct and in range");
    used[a] = true;
  }
  std::sort(base_axes.begin(), base_axes.end());
  std::vector<std::size_t> leb;
  for (std::size_t a = 0; a < dimension; ++a) {
    if (!used[a]) leb.push_back(a);
  }
  return Measure(std::make_shared<const Node>(
      Node{PaddedMeasure{std::move(base), std::move(base_axes), std::move(leb), dimension}}));
}

std::size_t Measure::dimension() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AtomicMeasure> || std::is_same_v<T, LebesgueMeasure> ||
                      std::is_same_v<T, PaddedMeasure>) {
          return m.dimension;
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          return m.factors.size();
        } else if constexpr (std::is_same_v<T, Pushforward2DMeasure>) {
          return 2;
        } else {
          return m.b.size() + 1;
        }
      },
      node_->v);
}

bool Measure::is_zero() const {
  const auto* a = as<AtomicMeasure>();
  return a != nullptr && a->atoms.empty();
}

// ---------------------------------------------------------------------------
// integration

namespace detail {

ErrorScale::ErrorScale(NestState& state, double factor)
    : state_(state), start_(state.error), factor_(factor) {}

ErrorScale::~ErrorScale() { state_.error = start_ + factor_ * (state_.error - start_); }

}  // namespace detail

namespace {

// Supplies breakpoints for an unbounded axis given the outer coordinates.
using BreakHints = std::function<void(std::size_t axis, const std::vector<double>& point,
                                      std::vector<double>& breaks)>;

// Integrates over the Lebesgue axes listed in `axes` (outermost first),
// writing coordinates into `point` and calling `leaf` at the innermost level.
cplx lebesgue_levels(std::span<const std::size_t> axes, std::span<const Interval> bounds,
                     std::vector<double>& point, const std::function<cplx()>& leaf,
                     const QuadratureConfig& cfg, NestState& st, const BreakHints& hints = {}) {
  if (axes.empty()) return leaf();
  const std::size_t axis = axes.front();
  auto inner = [&](double t) {
    point[axis] = t;
    return lebesgue_levels(axes.subspan(1), bounds.subspan(1), point, leaf, cfg, st, hints);
  };
  const Interval& range = bounds.front();
  if (hints && std::isinf(range.lo) && std::isinf(range.hi)) {
    std::vector<double> breaks;
    hints(axis, point, breaks);
    return detail::nested_line(inner, breaks, cfg, st);
  }
  return detail::nested_interval(inner, range.lo, range.hi, cfg, st);
}

cplx integrate_product(const ProductMeasure& p, std::size_t level, std::vector<double>& point,
                       const MultiIntegrand& f, const QuadratureConfig& cfg, NestState& st) {
  if (level == p.factors.size()) return f(std::span<const double>(point));
  return detail::integrate_nested_1d(
      p.factors[level],
      [&](double t) {
        point[level] = t;
        return integrate_product(p, level + 1, point, f, cfg, st);
      },
      cfg, st);
}

}  // namespace

namespace detail {

cplx integrate_nested_1d(const Measure& mu, const std::function<cplx(double)>& f,
                         const QuadratureConfig& cfg, NestState& state) {
  require(mu.dimension() == 1, "expected a one-dimensional measure");
  return integrate_nested(
      mu, [&](std::span<const double> t) { return f(t[0]); }, cfg, state);
}

cplx integrate_nested(const Measure& mu, const MultiIntegrand& f, const QuadratureConfig& cfg,
                      NestState& st) {
  const auto& v = mu.node().v;

  if (const auto* a = std::get_if<AtomicMeasure>(&v)) {
    cplx sum;
    for (const auto& atom : a->atoms) {
      ErrorScale scale(st, atom.weight);
      sum += atom.weight * f(std::span<const double>(atom.location));
    }
    return sum;
  }

  if (const auto* l = std::get_if<LebesgueMeasure>(&v)) {
    const std::size_t k = l->dimension;
    std::vector<std::size_t> axes(k);
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    std::vector<Interval> bounds(k, Interval{-kInf, kInf});
    if (l->support) bounds = l->support->axes;
    std::vector<double> point(k, 0.0);
    const std::function<cplx()> leaf = [&]() -> cplx {
      const std::span<const double> t(point);
      if (l->density.unit) return f(t);
      const double w = l->density.fn(t);
      if (w == 0.0) return {};
      return w * f(t);
    };
    return lebesgue_levels(axes, bounds, point, leaf, cfg, st);
  }

  if (const auto* p = std::get_if<ProductMeasure>(&v)) {
    std::vector<double> point(p->factors.size(), 0.0);
    return integrate_product(*p, 0, point, f, cfg, st);
  }

  if (const auto* pf = std::get_if<Pushforward2DMeasure>(&v)) {
    return integrate_nested_1d(
        pf->base,
        [&](double t1) {
          // Split where either image coordinate vanishes; for large |t1|
          // those points move far from the origin.
          std::vector<double> breaks;
          if (pf->beta != 0.0) breaks.push_back(-pf->alpha * t1 / pf->beta);
          if (pf->delta != 0.0) breaks.push_back(-pf->gamma * t1 / pf->delta);
          return nested_line(
              [&](double t2) {
                const double x[2] = {pf->alpha * t1 + pf->beta * t2, pf->gamma * t1 + pf->delta * t2};
                return f(std::span<const double>(x, 2));
              },
              breaks, cfg, st);
        },
        cfg, st);
  }

  if (const auto* lad = std::get_if<LadderMeasure>(&v)) {
    const std::size_t n = lad->b.size() + 1;
    std::vector<std::size_t> axes(n - 1);
    std::iota(axes.begin(), axes.end(), std::size_t{1});  // t_2 outermost ... t_n innermost
    const std::vector<Interval> bounds(n - 1, Interval{-kInf, kInf});
    ErrorScale scale(st, lad->scale);
    const cplx value = integrate_nested_1d(
        lad->base,
        [&](double t1) {
          std::vector<double> t(n, 0.0);
          std::vector<double> x(n, 0.0);
          t[0] = t1;
          const std::function<cplx()> leaf = [&]() {
            double sum = 0.0;
            for (std::size_t j = 0; j + 1 < n; ++j) x[j] = t[0] - lad->b[j] * t[j + 1];
            for (double tj : t) sum += tj;
            x[n - 1] = sum;
            return f(std::span<const double>(x));
          };
          // Axis j+1 has x_j = 0 at t_1 / b_j; the innermost axis also
          // splits where the coordinate sum vanishes.
          const BreakHints hints = [&](std::size_t axis, const std::vector<double>& pt,
                                       std::vector<double>& breaks) {
            breaks.push_back(pt[0] / lad->b[axis - 1]);
            if (axis + 1 == n) {
              double others = 0.0;
              for (std::size_t j = 0; j < axis; ++j) others += pt[j];
              breaks.push_back(-others);
            }
          };
          return lebesgue_levels(axes, bounds, t, leaf, cfg, st, hints);
        },
        cfg, st);
    return lad->scale * value;
  }

  const auto& pad = std::get<PaddedMeasure>(v);
  const std::vector<Interval> bounds(pad.lebesgue_axes.size(), Interval{-kInf, kInf});
  return integrate_nested(
      pad.base,
      [&](std::span<const double> s) {
        std::vector<double> x(pad.dimension, 0.0);
        for (std::size_t j = 0; j < pad.base_axes.size(); ++j) x[pad.base_axes[j]] = s[j];
        const std::function<cplx()> leaf = [&]() { return f(std::span<const double>(x)); };
        return lebesgue_levels(pad.lebesgue_axes, bounds, x, leaf, cfg, st);
      },
      cfg, st);
}

}  // namespace detail

QuadratureResult integrate(const Measure& mu, const MultiIntegrand& f, const QuadratureConfig& cfg) {
  cfg.validate();
  return detail::run_nested(
      [&](NestState& st) { return detail::integrate_nested(mu, f, cfg, st); });
}

// ---------------------------------------------------------------------------
// mass

namespace {

double factorial(std::size_t d) {
  double r = 1.0;
  for (std::size_t i = 2; i <= d; ++i) r *= static_cast<double>(i);
  return r;
}

// vol{ x in prod [a_i, b_i] : sum x <= s } for finite intervals.
double box_below_hyperplane(std::span<const double> a, std::span<const double> w, double s) {
  const std::size_t d = a.size();
  const double shift = s - std::accumulate(a.begin(), a.end(), 0.0);
  if (shift <= 0.0) return 0.0;
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    double r = shift;
    int bits = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::size_t{1} << i)) {
        r -= w[i];
        ++bits;
      }
    }
    if (r > 0.0) total += ((bits % 2) ? -1.0 : 1.0) * std::pow(r, static_cast<double>(d));
  }
  return total / factorial(d);
}

// vol{ x in prod [lo_i, hi_i] : L <= sum x <= H }, throwing DivergedSignal
// when the set is unbounded with positive volume.
double slab_volume(std::vector<double> lo, std::vector<double> hi, double L, double H) {
  const std::size_t d = lo.size();
  if (L > H) return 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < d; ++k) {
      double others_hi = 0.0;
      double others_lo = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == k) continue;
        others_hi += hi[i];
        others_lo += lo[i];
      }
      if (std::isfinite(L) && std::isfinite(others_hi) && L - others_hi > lo[k]) {
        lo[k] = L - others_hi;
        changed = true;
      }
      if (std::isfinite(H) && std::isfinite(others_lo) && H - others_lo < hi[k]) {
        hi[k] = H - others_lo;
        changed = true;
      }
      if (lo[k] >= hi[k]) return 0.0;
    }
  }
  if (L == H) return 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k])) throw DivergedSignal{};
  }
  std::vector<double> w(d);
  for (std::size_t k = 0; k < d; ++k) w[k] = hi[k] - lo[k];
  const double upper = std::isfinite(H) ? box_below_hyperplane(lo, w, H)
                                        : std::accumulate(w.begin(), w.end(), 1.0, std::multiplies<>());
  const double lower = std::isfinite(L) ? box_below_hyperplane(lo, w, L) : 0.0;
  return std::max(0.0, upper - lower);
}

// Preimage of [lo, hi] under t -> c + slope * t.
Interval affine_preimage(double c, double slope, const Interval& iv) {
  if (slope == 0.0) {
    if (iv.contains(c)) return {-kInf, kInf};
    return {1.0, 0.0};  // empty
  }
  double a = (iv.lo - c) / slope;
  double b = (iv.hi - c) / slope;
  if (a > b) std::swap(a, b);
  return {a, b};
}

double interval_length_or_diverge(const Interval& iv) {
  if (iv.lo > iv.hi) return 0.0;
  if (iv.lo == iv.hi) return 0.0;
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw DivergedSignal{};
  return iv.hi - iv.lo;
}

double box_mass(const Measure& mu, const Box& box, const QuadratureConfig& cfg, NestState& st);

double lebesgue_lengths(std::span<const Interval> axes) {
  double vol = 1.0;
  bool infinite = false;
  for (const auto& iv : axes) {
    const double len = iv.hi - iv.lo;
    if (len == 0.0) return 0.0;
    if (!std::isfinite(len)) infinite = true;
    else vol *= len;
  }
  if (infinite) throw DivergedSignal{};
  return vol;
}

double box_mass(const Measure& mu, const Box& box, const QuadratureConfig& cfg, NestState& st) {
  require(box.dimension() == mu.dimension(), "box dimension does not match the measure");
  const auto& v = mu.node().v;

  if (const auto* a = std::get_if<AtomicMeasure>(&v)) {
    double m = 0.0;
    for (const auto& atom : a->atoms) {
      if (box.contains(atom.location)) m += atom.weight;
    }
    return m;
  }

  if (const auto* l = std::get_if<LebesgueMeasure>(&v)) {
    Box region = box;
    if (l->support) {
      auto clipped = box.intersect(*l->support);
      if (!clipped) return 0.0;
      region = *clipped;
    }
    if (l->density.unit) return lebesgue_lengths(region.axes);
    for (const auto& iv : region.axes) {
      if (iv.lo == iv.hi) return 0.0;
    }
    std::vector<std::size_t> axes(l->dimension);
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    std::vector<double> point(l->dimension, 0.0);
    const std::function<cplx()> leaf = [&]() { return cplx(l->density.fn(point), 0.0); };
    return lebesgue_levels(axes, region.axes, point, leaf, cfg, st).real();
  }

  if (const auto* p = std::get_if<ProductMeasure>(&v)) {
    double m = 1.0;
    bool diverged = false;
    for (std::size_t j = 0; j < p->factors.size(); ++j) {
      double mj = 0.0;
      try {
        mj = box_mass(p->factors[j], Box({box.axes[j]}), cfg, st);
      } catch (const DivergedSignal&) {
        diverged = true;
        continue;
      }
      if (mj == 0.0) return 0.0;
      m *= mj;
    }
    if (diverged) throw DivergedSignal{};
    return m;
  }

  if (const auto* pf = std::get_if<Pushforward2DMeasure>(&v)) {
    return detail::integrate_nested_1d(
               pf->base,
               [&](double t1) {
                 const Interval i1 = affine_preimage(pf->alpha * t1, pf->beta, box.axes[0]);
                 const Interval i2 = affine_preimage(pf->gamma * t1, pf->delta, box.axes[1]);
                 const Interval both{std::max(i1.lo, i2.lo), std::min(i1.hi, i2.hi)};
                 return cplx(interval_length_or_diverge(both), 0.0);
               },
               cfg, st)
        .real();
  }

  if (const auto* lad = std::get_if<LadderMeasure>(&v)) {
    const std::size_t n = lad->b.size() + 1;
    detail::ErrorScale scale(st, lad->scale);
    const double m = detail::integrate_nested_1d(
                         lad->base,
                         [&](double t1) {
                           std::vector<double> lo(n - 1), hi(n - 1);
                           for (std::size_t j = 0; j + 1 < n; ++j) {
                             // t1 - b_j t_{j+1} in [lo_j, hi_j]
                             const Interval pre = affine_preimage(t1, -lad->b[j], box.axes[j]);
                             lo[j] = pre.lo;
                             hi[j] = pre.hi;
                             if (pre.lo > pre.hi) return cplx{};
                           }
                           const Interval& last = box.axes[n - 1];
                           return cplx(slab_volume(lo, hi, last.lo - t1, last.hi - t1), 0.0);
                         },
                         cfg, st)
                         .real();
    return lad->scale * m;
  }

  const auto& pad = std::get<PaddedMeasure>(v);
  std::vector<Interval> base_axes;
  for (std::size_t a : pad.base_axes) base_axes.push_back(box.axes[a]);
  std::vector<Interval> leb_axes;
  for (std::size_t a : pad.lebesgue_axes) leb_axes.push_back(box.axes[a]);
  for (const auto& iv : leb_axes) {
    if (iv.lo == iv.hi) return 0.0;
  }
  const double base_mass = box_mass(pad.base, Box(base_axes), cfg, st);
  if (base_mass == 0.0) return 0.0;
  return base_mass * lebesgue_lengths(leb_axes);
}

}  // namespace

QuadratureResult mass(const Measure& mu, const BoxUnion& U, const QuadratureConfig& cfg) {
  cfg.validate();
  for (const auto& box : U) require(box.dimension() == mu.dimension(), "box dimension does not match the measure");
  require(U.size() <= 20, "mass: at most 20 boxes per union");
  return detail::run_nested([&](NestState& st) {
    // Inclusion-exclusion over intersections; every intersection is a box.
    double total = 0.0;
    const std::size_t count = U.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << count); ++mask) {
      std::optional<Box> cut;
      int bits = 0;
      for (std::size_t i = 0; i < count && (bits == 0 || cut); ++i) {
        if (!(mask & (std::size_t{1} << i))) continue;
        cut = bits == 0 ? std::optional<Box>(U[i]) : cut->intersect(U[i]);
        ++bits;
      }
      if (!cut) continue;
      const double m = box_mass(mu, *cut, cfg, st);
      total += (bits % 2 ? 1.0 : -1.0) * m;
    }
    return cplx(total, 0.0);
  });
}

}  // namespace nvk
