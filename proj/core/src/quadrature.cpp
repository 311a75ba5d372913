#include "nvk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "nvk/errors.hpp"

namespace nvk {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be positive");
  if (max_subdivisions < 1) throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
}

namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kHalfPi = std::numbers::pi / 2.0;

struct Segment {
  double a = 0.0;
  double b = 0.0;
  cplx value;
  double error = 0.0;
  double floor = 0.0;  // roundoff limit 50 eps |f|
  bool operator<(const Segment& other) const { return error < other.error; }
};

void require_finite(const cplx& v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw QuadratureError("integrand not finite");
  }
}

template <class G>
Segment kronrod15(const G& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = g(center);
  require_finite(fc);
  cplx res_k = fc * kWgk[7];
  cplx res_g = fc * kWg[3];
  double res_abs = std::abs(fc) * kWgk[7];
  std::array<cplx, 7> f1{};
  std::array<cplx, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    require_finite(f1[j]);
    require_finite(f2[j]);
    const cplx sum = f1[j] + f2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const cplx mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  res_asc *= std::abs(half);
  res_abs *= std::abs(half);

  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  const double floor = 50.0 * kEps * res_abs;
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(floor, err);
  return {a, b, res_k * half, err, floor};
}

struct AdaptiveOutcome {
  cplx value;
  double error = 0.0;
  bool converged = false;
  bool roundoff_limited = false;
};

template <class G>
AdaptiveOutcome adaptive(const G& g, double a, double b, double rel_tol, double abs_tol,
                         int max_segments, int initial_pieces) {
  if (a == b) return {cplx{}, 0.0, true};
  std::priority_queue<Segment> queue;
  std::vector<Segment> frozen;
  const int pieces = std::max(1, std::min(initial_pieces, max_segments));
  const double step = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + step * i;
    const double hi = (i + 1 == pieces) ? b : a + step * (i + 1);
    queue.push(kronrod15(g, lo, hi));
  }

  struct Totals {
    cplx value;
    double error = 0.0;
    double floor = 0.0;
  };
  auto totals = [&] {
    Totals t;
    auto q = queue;  // cheap relative to integrand evaluation at these sizes
    while (!q.empty()) {
      t.value += q.top().value;
      t.error += q.top().error;
      t.floor += q.top().floor;
      q.pop();
    }
    for (const auto& s : frozen) {
      t.value += s.value;
      t.error += s.error;
      t.floor += s.floor;
    }
    return t;
  };

  Totals t = totals();
  cplx value = t.value;
  double error = t.error;
  double floor = t.floor;
  int segments = pieces;
  int since_resum = 0;
  while (true) {
    const double target = std::max(abs_tol, rel_tol * std::abs(value));
    if (error <= target) return {value, error, true};
    if (queue.empty() || segments >= max_segments) return {value, error, false};
    // Every segment sits at its roundoff limit: refinement cannot help, so
    // the result is as good as the arithmetic allows and counts as converged.
    if (error <= 1.01 * floor) return {value, error, true, true};

    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) <= 4.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Segment left = kronrod15(g, worst.a, mid);
    Segment right = kronrod15(g, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    floor += left.floor + right.floor - worst.floor;
    queue.push(left);
    queue.push(right);
    ++segments;
    if (++since_resum == 64) {
      t = totals();
      value = t.value;
      error = t.error;
      floor = t.floor;
      since_resum = 0;
    }
  }
}

// Windowed doubling on |f|. Returns true when the windowed partial sums pass
// the threshold while their increments are still non-decreasing.
bool looks_divergent(const LineIntegrand& f, double lo, double hi, const QuadratureConfig& cfg) {
  const bool left_open = std::isinf(lo);
  const bool right_open = std::isinf(hi);
  if (!left_open && !right_open) return false;

  auto abs_f = [&](double t) { return cplx(std::abs(f(t)), 0.0); };
  // Tail windows are smooth; start each with a single segment.
  auto window = [&](double a, double b, int pieces) {
    return adaptive(abs_f, a, b, 1e-6, 0.0, 200, pieces).value.real();
  };

  double center = 0.0;
  if (!left_open) center = lo;
  if (!right_open) center = hi;
  double partial = 0.0;
  {
    const double a = left_open ? center - 16.0 : lo;
    const double b = right_open ? center + 16.0 : hi;
    partial = window(a, b, 8);
  }
  double width = 16.0;
  double prev_increment = 0.0;
  double max_increment = 0.0;
  int non_decreasing_run = 0;
  // Past 2^64 the coordinates lose all resolution; stop there.
  for (int j = 0; j < 60; ++j) {
    double increment = 0.0;
    if (right_open) increment += window(center + width, center + 2.0 * width, 1);
    if (left_open) increment += window(center - 2.0 * width, center - width, 1);
    width *= 2.0;
    partial += increment;
    non_decreasing_run = (j > 0 && increment >= prev_increment) ? non_decreasing_run + 1 : 0;
    prev_increment = increment;
    max_increment = std::max(max_increment, increment);
    if (partial > cfg.divergence_threshold) return non_decreasing_run >= 3;
    if (j > 8 && increment <= 1e-14 * partial) return false;
  }
  // Logarithmic growth stays below the threshold over any feasible range;
  // a dyadic window that still carries half the largest one has not decayed.
  return prev_increment > 0.0 && prev_increment >= 0.5 * max_increment;
}

// Cheap test before the adaptive pass: an integrable tail needs t*|f(t)| -> 0.
// Returns true when that product does not decay across a few probe points
// and is large enough to matter at the requested absolute tolerance.
bool tail_not_decaying(const LineIntegrand& f, double lo, double hi, double abs_tol) {
  const double center = std::isinf(lo) ? (std::isinf(hi) ? 0.0 : hi) : lo;
  auto product = [&](double offset) {
    double m = 0.0;
    if (std::isinf(hi)) m = std::max(m, offset * std::abs(f(center + offset)));
    if (std::isinf(lo)) m = std::max(m, offset * std::abs(f(center - offset)));
    return m;
  };
  const double p1 = product(0x1p8);
  const double p2 = product(0x1p16);
  const double p3 = product(0x1p24);
  return p3 > std::max(abs_tol, 1e-8) && p2 >= 0.5 * p1 && p3 >= 0.5 * p2;
}

// Heuristic evaluations (tail probe, divergence scan) run inner nested
// integrals too; their outcome must not leak into the caller's nest state.
class HeuristicScope {
 public:
  explicit HeuristicScope(detail::NestState* state)
      : state_(state), saved_(state ? *state : detail::NestState{}) {}
  ~HeuristicScope() {
    if (state_) *state_ = saved_;
  }
  HeuristicScope(const HeuristicScope&) = delete;
  HeuristicScope& operator=(const HeuristicScope&) = delete;

 private:
  detail::NestState* state_;
  detail::NestState saved_;
};

QuadratureResult integrate_interval_impl(const LineIntegrand& f, double lo, double hi,
                                         const QuadratureConfig& cfg, detail::NestState* state = nullptr) {
  cfg.validate();
  if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("integration bound is NaN");
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  // Whole line: t = tan(theta). Half-line: t = end + tan(theta) on a
  // quarter period, so a far-away finite end keeps full resolution.
  // Finite interval: no mapping.
  bool early_divergence = false;
  if (cfg.detect_divergence && (std::isinf(lo) || std::isinf(hi))) {
    const HeuristicScope scope(state);
    early_divergence = tail_not_decaying(f, lo, hi, cfg.abs_tol) && looks_divergent(f, lo, hi, cfg);
  }
  if (early_divergence) {
    QuadratureResult r;
    r.value = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    r.error_estimate = std::numeric_limits<double>::infinity();
    r.diverged = true;
    return r;
  }
  AdaptiveOutcome out;
  if (std::isinf(lo) && std::isinf(hi)) {
    auto g = [&](double theta) {
      const double c = std::cos(theta);
      return f(std::tan(theta)) / (c * c);
    };
    out = adaptive(g, -kHalfPi, kHalfPi, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, 8);
  } else if (std::isinf(lo) || std::isinf(hi)) {
    const double end = std::isinf(lo) ? hi : lo;
    auto g = [&](double theta) {
      const double c = std::cos(theta);
      return f(end + std::tan(theta)) / (c * c);
    };
    const double a = std::isinf(lo) ? -kHalfPi : 0.0;
    const double b = std::isinf(lo) ? 0.0 : kHalfPi;
    out = adaptive(g, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, 4);
  } else {
    out = adaptive(f, lo, hi, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, 2);
  }
  QuadratureResult r;
  r.value = sign * out.value;
  r.error_estimate = out.error;
  r.converged = out.converged;
  if (cfg.detect_divergence && !out.converged && !out.roundoff_limited) {
    const HeuristicScope scope(state);
    r.diverged = looks_divergent(f, lo, hi, cfg);
  }
  return r;
}

}  // namespace

QuadratureResult integrate_interval(const LineIntegrand& f, double lo, double hi,
                                    const QuadratureConfig& cfg) {
  return integrate_interval_impl(f, lo, hi, cfg);
}

QuadratureResult integrate_line(const LineIntegrand& f, const QuadratureConfig& cfg) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return integrate_interval_impl(f, -inf, inf, cfg);
}

namespace detail {

cplx nested_interval(const LineIntegrand& f, double lo, double hi, const QuadratureConfig& cfg,
                     NestState& state) {
  ++state.depth;
  struct Restore {
    NestState& s;
    ~Restore() { --s.depth; }
  } restore{state};
  // An absolute floor at an inner level is integrated over the outer range,
  // which may be unbounded; inner levels rely on the relative target and the
  // roundoff limit instead.
  QuadratureConfig level_cfg = cfg;
  if (state.depth > 1) level_cfg.abs_tol = std::numeric_limits<double>::min();
  const QuadratureResult r = integrate_interval_impl(f, lo, hi, level_cfg, &state);
  if (r.diverged) throw DivergedSignal{};
  if (!r.converged) state.converged = false;
  if (state.depth == 1) state.error += r.error_estimate;
  return r.value;
}

cplx nested_line(const LineIntegrand& f, std::span<const double> breaks, const QuadratureConfig& cfg,
                 NestState& state) {
  std::vector<double> pts;
  for (double p : breaks) {
    if (std::isfinite(p)) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (pts.empty()) return nested_interval(f, -inf, inf, cfg, state);
  // Pieces share the tolerance budget; each gets the full relative target.
  cplx total = nested_interval(f, -inf, pts.front(), cfg, state);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += nested_interval(f, pts[i], pts[i + 1], cfg, state);
  total += nested_interval(f, pts.back(), inf, cfg, state);
  return total;
}

QuadratureResult run_nested(const std::function<cplx(NestState&)>& body) {
  NestState state;
  QuadratureResult r;
  try {
    r.value = body(state);
  } catch (const DivergedSignal&) {
    r.value = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    r.error_estimate = std::numeric_limits<double>::infinity();
    r.converged = false;
    r.diverged = true;
    return r;
  }
  r.error_estimate = state.error;
  r.converged = state.converged;
  return r;
}

}  // namespace detail

namespace {

cplx iterate_axes(const MultiIntegrand& f, std::span<const std::size_t> order,
                  std::span<const std::pair<double, double>> bounds, std::vector<double>& point,
                  std::size_t level, const QuadratureConfig& cfg, detail::NestState& state) {
  // Outermost axis is order.back(); recursion descends toward order[0].
  const std::size_t axis = order[level];
  auto inner = [&](double t) -> cplx {
    point[axis] = t;
    if (level == 0) return f(std::span<const double>(point));
    return iterate_axes(f, order, bounds, point, level - 1, cfg, state);
  };
  const auto [lo, hi] = bounds[level];
  return detail::nested_interval(inner, lo, hi, cfg, state);
}

void check_order(std::span<const std::size_t> order) {
  std::vector<bool> seen(order.size(), false);
  for (std::size_t axis : order) {
    if (axis >= order.size() || seen[axis]) {
      throw std::invalid_argument("integration order must be a permutation of the axes");
    }
    seen[axis] = true;
  }
}

}  // namespace

QuadratureResult integrate_iterated(const MultiIntegrand& f, std::span<const std::size_t> order,
                                    std::span<const std::pair<double, double>> bounds,
                                    const QuadratureConfig& cfg) {
  cfg.validate();
  check_order(order);
  if (bounds.size() != order.size()) {
    throw std::invalid_argument("integrate_iterated: bounds and order differ in length");
  }
  if (order.empty()) {
    const std::vector<double> none;
    QuadratureResult r;
    r.value = f(std::span<const double>(none));
    r.converged = true;
    return r;
  }
  std::vector<std::pair<double, double>> per_level(order.size());
  for (std::size_t level = 0; level < order.size(); ++level) per_level[level] = bounds[order[level]];
  return detail::run_nested([&](detail::NestState& state) {
    std::vector<double> point(order.size(), 0.0);
    return iterate_axes(f, order, per_level, point, order.size() - 1, cfg, state);
  });
}

QuadratureResult integrate_iterated(const MultiIntegrand& f, std::span<const std::size_t> order,
                                    const QuadratureConfig& cfg) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<double, double>> bounds(order.size(), {-inf, inf});
  return integrate_iterated(f, order, bounds, cfg);
}

}  // namespace nvk
