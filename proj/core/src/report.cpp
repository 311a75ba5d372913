#include "nvk/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "nvk/complex_format.hpp"
#include "nvk/conditions.hpp"
#include "nvk/convex_transform.hpp"
#include "nvk/errors.hpp"
#include "nvk/kernels.hpp"
#include "nvk/ladder_verify.hpp"
#include "nvk/random.hpp"
#include "nvk/representation.hpp"
#include "nvk/residue_oracle.hpp"

namespace nvk {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fmt(double x) { return format_real(x); }

std::string list(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s + ")";
}

std::string list(std::span<const cplx> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_complex(v[i]);
  return s + ")";
}

struct RowSink {
  std::string suite;
  std::size_t sample;
  std::vector<ReportRow>& rows;

  void add(const std::string& check, const std::string& inputs, cplx lhs, cplx rhs, double tol) {
    ReportRow r;
    r.suite = suite;
    r.check = check;
    r.sample = sample;
    r.inputs = inputs;
    r.lhs = lhs;
    r.rhs = rhs;
    const double diff = std::abs(lhs - rhs);
    r.rel_error = rhs == cplx{} ? diff : diff / std::abs(rhs);
    if (!std::isfinite(r.rel_error)) r.rel_error = std::numeric_limits<double>::infinity();
    r.tolerance = tol;
    r.pass = r.rel_error <= tol;
    rows.push_back(std::move(r));
  }

  void fail(const std::string& check, const std::string& inputs, const std::string& what, double tol) {
    ReportRow r;
    r.suite = suite;
    r.check = check;
    r.sample = sample;
    r.inputs = inputs + " error=" + what;
    r.lhs = r.rhs = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    r.rel_error = std::numeric_limits<double>::infinity();
    r.tolerance = tol;
    r.pass = false;
    rows.push_back(std::move(r));
  }
};

std::vector<double> random_b(Rng& rng, std::size_t count) {
  std::vector<double> b(count);
  for (auto& x : b) x = std::exp(rng.uniform(std::log(0.25), std::log(4.0)));
  return b;
}

// --- kernels ---------------------------------------------------------------

void kernels_sample(int n_opt, Rng& rng, RowSink& out) {
  const int lo = n_opt == 0 ? 1 : n_opt;
  const int hi = n_opt == 0 ? 4 : n_opt;
  for (int n = lo; n <= hi; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const PolyUpperPoint z = rng.poly_upper_point(un);
    std::vector<double> t(un);
    for (auto& x : t) x = rng.uniform(-10.0, 10.0);
    const std::string in = "n=" + std::to_string(n) + " z=" + list(z.coords()) + " t=" + list(t);
    out.add("Kn_sum_vs_rational_n" + std::to_string(n), in, eval_Kn_sum(z, t), eval_Kn_rational(z, t), 1e-12);
    if (n == 1) {
      const cplx closed = (1.0 + t[0] * z[0]) / ((1.0 + t[0] * t[0]) * (t[0] - z[0]));
      out.add("K1_closed_form", in, closed, eval_K1(z[0], t[0]), 1e-12);
      continue;
    }
    const std::vector<double> b = random_b(rng, un - 1);
    const std::string inb = in + " b=" + list(b);
    const cplx k0 = eval_Ktilde0(z, t, b);
    out.add("Ktilde0_vs_md_n" + std::to_string(n), inb, eval_Ktilde_md(z, t, {n, 0, b}), k0, 1e-12);
    const Eigen::VectorXd s = build_Mn(b) * Eigen::Map<const Eigen::VectorXd>(t.data(), n);
    out.add("Ktilde0_vs_Kn_of_Mt_n" + std::to_string(n), inb,
            eval_Kn(z, std::span<const double>(s.data(), un)), k0, 1e-12);
  }
}

// --- ladder ----------------------------------------------------------------

void ladder_sample(int n, const QuadratureConfig& cfg, Rng& rng, RowSink& out) {
  const std::size_t un = static_cast<std::size_t>(n);
  const std::vector<double> b = random_b(rng, un - 1);
  const PolyUpperPoint z = rng.poly_upper_point(un, 3.0, 0.2, 5.0);
  std::vector<double> t(un);
  for (auto& x : t) x = rng.uniform(-3.0, 3.0);
  const std::string base = "n=" + std::to_string(n) + " b=" + list(b) + " z=" + list(z.coords());

  for (int m = n; m >= 3; --m) {
    const int d = n - m;
    const std::span<const double> tt(t.data(), static_cast<std::size_t>(m - 1));
    const std::string in = base + " t=" + list(tt);
    const std::string tag = "_m" + std::to_string(m) + "_d" + std::to_string(d);
    try {
      const LhsRhs q = verify_step(m, d, b, z, tt, cfg);
      out.add("step" + tag, in, q.lhs, q.rhs, 1e-7);
    } catch (const QuadratureError& e) {
      out.fail("step" + tag, in, e.what(), 1e-7);
    }
    const LhsRhs r = verify_step_residue(m, d, b, z, tt);
    out.add("step_residue" + tag, in, r.lhs, r.rhs, 1e-8);
  }

  const std::string in1 = base + " t1=" + fmt(t[0]);
  try {
    const LhsRhs f = verify_final_step(b, z, t[0], cfg);
    out.add("final_step", in1, f.lhs, f.rhs, 1e-7);
  } catch (const QuadratureError& e) {
    out.fail("final_step", in1, e.what(), 1e-7);
  }
  const LhsRhs fr = verify_step_residue(2, n - 2, b, z, std::span<const double>(t.data(), 1));
  out.add("final_step_residue", in1, fr.lhs, fr.rhs, 1e-8);

  const std::vector<double> k = b_to_k(b);
  cplx w;
  for (std::size_t l = 0; l < un; ++l) w += k[l] * z[l];
  out.add("final_argument", base, final_argument(b, z), w, 1e-12);
  out.add("rung_factors", base, rung_factor_product(b), std::pow(kPi, n - 1) / beta_n(b), 1e-13);

  const ReductionPath path = n <= 3 ? ReductionPath::Iterated : ReductionPath::RungByRung;
  const std::string check = n <= 3 ? "full_reduction" : "full_reduction_rungs";
  try {
    const LhsRhs full = verify_full_reduction(b, z, t[0], path, cfg);
    out.add(check, in1, full.lhs, full.rhs, 1e-6);
  } catch (const QuadratureError& e) {
    out.fail(check, in1, e.what(), 1e-6);
  }
}

// --- main theorem ----------------------------------------------------------

RepresentationData random_atomic_data(Rng& rng) {
  RepresentationData d;
  d.a = rng.uniform(-2.0, 2.0);
  d.b = {rng.uniform(0.0, 2.0)};
  const int count = rng.integer(1, 5);
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) atoms.push_back({{rng.uniform(-3.0, 3.0)}, rng.uniform(0.1, 3.0)});
  d.mu = Measure::atomic(1, std::move(atoms));
  return d;
}

std::string describe_atoms(const RepresentationData& d) {
  std::string s = "a=" + fmt(d.a) + " b=" + fmt(d.b[0]) + " atoms=(";
  const auto* at = d.mu.as<AtomicMeasure>();
  for (std::size_t i = 0; i < at->atoms.size(); ++i) {
    s += (i ? " " : "") + fmt(at->atoms[i].location[0]) + ":" + fmt(at->atoms[i].weight);
  }
  return s + ")";
}

void main_sample(int n, const QuadratureConfig& cfg, Rng& rng, RowSink& out) {
  const std::size_t un = static_cast<std::size_t>(n);
  const RepresentationData data = random_atomic_data(rng);
  const std::vector<double> k = rng.convex_weights(un);
  const PolyUpperPoint z = rng.poly_upper_point(un);
  const std::string in = describe_atoms(data) + " k=" + list(k) + " z=" + list(z.coords());
  cplx w;
  for (std::size_t l = 0; l < un; ++l) w += k[l] * z[l];
  const cplx expected = eval(data, PolyUpperPoint({w}), cfg);
  const RepresentationData tr = transform(data, k);
  out.add("closed_form", in, eval(tr, z, cfg, Reduction::ClosedForm), expected, 1e-12);
  if (n == 2) {
    try {
      out.add("quadrature", in, eval(tr, z, cfg, Reduction::Quadrature), expected, 1e-7);
      out.add("convex_form", in, eval_convex_form(data, k, z, cfg), expected, 1e-7);
    } catch (const QuadratureError& e) {
      out.fail("quadrature", in, e.what(), 1e-7);
    }
  }
}

// --- conditions ------------------------------------------------------------

void conditions_fixture(const ClassificationFixture& f, const QuadratureConfig& cfg, RowSink& out) {
  const std::string in = "alpha=" + fmt(f.alpha) + " beta=" + fmt(f.beta) + " gamma=" + fmt(f.gamma) +
                         " delta=" + fmt(f.delta) + " mu1=" + f.base_label;
  const ClassifyOutcome c = classify_measure(f.alpha, f.beta, f.gamma, f.delta, f.base, cfg);
  const bool representing = c.classification.verdict == Verdict::Representing;
  const bool growth_ok = c.evidence.growth_converges();
  const bool nev_ok = c.evidence.max_nevanlinna_ratio <= 1e-8;
  const bool pass = c.classification.label() == f.expected && representing == f.representing &&
                    growth_ok == f.representing && nev_ok == f.representing;
  ReportRow r;
  r.suite = out.suite;
  r.check = "classify_" + f.name;
  r.sample = out.sample;
  r.inputs = in + " case=" + std::string(to_string(c.classification.label())) +
             " expected=" + std::string(to_string(f.expected));
  r.lhs = growth_ok ? c.evidence.growth.value : cplx(std::numeric_limits<double>::infinity(), 0.0);
  r.rhs = c.evidence.max_nevanlinna_modulus;
  r.rel_error = pass ? 0.0 : 1.0;
  r.tolerance = 0.0;
  r.pass = pass;
  out.rows.push_back(std::move(r));
}

void conditions_sample(const QuadratureConfig& cfg, Rng& rng, RowSink& out) {
  const double t1 = rng.uniform(-3.0, 3.0);
  const cplx z1 = rng.upper_point(3.0, 0.2, 5.0);
  const cplx z2 = rng.upper_point(3.0, 0.2, 5.0);
  auto coef = [&] {
    const double s = rng.uniform(0.3, 3.0);
    return rng.uniform() < 0.5 ? -s : s;
  };
  const double alpha = coef(), gamma = coef();

  {  // beta = 0: inner growth integral is pi / (|delta| (1 + alpha^2 t1^2)).
    const double delta = coef();
    const std::string in = "alpha=" + fmt(alpha) + " beta=0 gamma=" + fmt(gamma) + " delta=" + fmt(delta) + " t1=" + fmt(t1);
    const RationalFunction F = growth_auxiliary(alpha, 0.0, gamma, delta, t1);
    const QuadratureResult q = integrate_line([&](double s) { return F(s); }, cfg);
    const double closed = kPi / (std::abs(delta) * (1.0 + alpha * alpha * t1 * t1));
    out.add("growth_beta0_quadrature", in, q.value, closed, 1e-8);
    out.add("growth_beta0_residue", in, line_integral(F), closed, 1e-8);
  }
  {  // beta > 0 > delta.
    const double beta = rng.uniform(0.3, 3.0), delta = -rng.uniform(0.3, 3.0);
    const std::string in = "alpha=" + fmt(alpha) + " beta=" + fmt(beta) + " gamma=" + fmt(gamma) + " delta=" + fmt(delta) + " t1=" + fmt(t1);
    const RationalFunction F = growth_auxiliary(alpha, beta, gamma, delta, t1);
    const double det = beta * gamma - alpha * delta;
    const double closed = kPi * (beta - delta) / (t1 * t1 * det * det + (beta - delta) * (beta - delta));
    out.add("growth_opposite_signs_quadrature", in, integrate_line([&](double s) { return F(s); }, cfg).value, closed, 1e-8);
    out.add("growth_opposite_signs_residue", in, line_integral(F), closed, 1e-8);
    const RationalFunction G = nevanlinna_auxiliary(alpha, beta, gamma, delta, t1, z1, z2);
    const std::string inz = in + " z=" + list(std::vector<cplx>{z1, z2});
    out.add("nevanlinna_opposite_signs_quadrature", inz, integrate_line([&](double s) { return G(s); }, cfg).value, 0.0, 1e-8);
    out.add("nevanlinna_opposite_signs_residue", inz, line_integral(G), 0.0, 1e-8);
  }
  {  // beta delta > 0.
    const double beta = coef();
    const double delta = (beta > 0 ? 1.0 : -1.0) * rng.uniform(0.3, 3.0);
    const std::string in = "alpha=" + fmt(alpha) + " beta=" + fmt(beta) + " gamma=" + fmt(gamma) + " delta=" + fmt(delta) +
                           " t1=" + fmt(t1) + " z=" + list(std::vector<cplx>{z1, z2});
    const RationalFunction G = nevanlinna_auxiliary(alpha, beta, gamma, delta, t1, z1, z2);
    const cplx w = (alpha * delta - beta * gamma) * t1 - delta * z1 + beta * std::conj(z2);
    // The pole picked up by the upper contour depends on sign(beta).
    const cplx closed = cplx(0.0, 4.0 * kPi * std::abs(beta) * delta) / (w * w * w);
    out.add("nevanlinna_same_signs_quadrature", in, integrate_line([&](double s) { return G(s); }, cfg).value, closed, 1e-8);
    out.add("nevanlinna_same_signs_residue", in, line_integral(G), closed, 1e-8);
  }
}

using SampleFn = std::function<void(std::size_t, RowSink&)>;

std::vector<ReportRow> run_samples(const std::string& suite, std::size_t count, unsigned jobs, const SampleFn& fn) {
  std::vector<std::vector<ReportRow>> per(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < count; s = next++) {
      RowSink sink{suite, s, per[s]};
      fn(s, sink);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&] {
    try {
      worker();
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(guarded);
  guarded();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  std::vector<ReportRow> rows;
  for (auto& v : per) {
    for (auto& r : v) rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

bool SuiteReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

double SuiteReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.rel_error);
  return m;
}

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"ladder", "main", "conditions", "kernels"};
  return names;
}

SuiteReport run_suite(const SuiteOptions& o) {
  o.cfg.validate();
  SuiteReport rep;
  rep.suite = o.suite;
  rep.seed = o.seed;
  rep.samples = o.samples;
  auto rng_for = [&](std::size_t s) { return Rng(splitmix(o.seed ^ splitmix(s + 1))); };

  if (o.suite == "kernels") {
    if (o.n < 0 || o.n > 8) throw std::invalid_argument("kernels suite supports 1 <= n <= 8 (0 runs 1..4)");
    rep.n = o.n;
    rep.rows = run_samples(o.suite, o.samples, o.jobs, [&](std::size_t s, RowSink& out) {
      Rng rng = rng_for(s);
      kernels_sample(o.n, rng, out);
    });
  } else if (o.suite == "ladder") {
    rep.n = o.n == 0 ? 3 : o.n;
    if (rep.n < 2 || rep.n > 6) throw std::invalid_argument("ladder suite supports 2 <= n <= 6");
    rep.rows = run_samples(o.suite, o.samples, o.jobs, [&](std::size_t s, RowSink& out) {
      Rng rng = rng_for(s);
      ladder_sample(rep.n, o.cfg, rng, out);
    });
  } else if (o.suite == "main") {
    rep.n = o.n == 0 ? 3 : o.n;
    if (rep.n < 2 || rep.n > 8) throw std::invalid_argument("main suite supports 2 <= n <= 8");
    rep.rows = run_samples(o.suite, o.samples, o.jobs, [&](std::size_t s, RowSink& out) {
      Rng rng = rng_for(s);
      main_sample(rep.n, o.cfg, rng, out);
    });
  } else if (o.suite == "conditions") {
    rep.n = 2;
    const auto fixtures = classification_fixtures();
    const std::size_t fixed = fixtures.size();
    rep.rows = run_samples(o.suite, fixed + o.samples, o.jobs, [&](std::size_t s, RowSink& out) {
      if (s < fixed) {
        conditions_fixture(fixtures[s], o.cfg, out);
        return;
      }
      Rng rng = rng_for(s - fixed);
      conditions_sample(o.cfg, rng, out);
    });
  } else {
    throw std::invalid_argument("unknown suite '" + o.suite + "' (expected ladder, main, conditions or kernels)");
  }
  return rep;
}

std::string to_json(const SuiteReport& report) {
  nlohmann::ordered_json doc;
  doc["suite"] = report.suite;
  doc["n"] = report.n;
  doc["seed"] = report.seed;
  doc["samples"] = report.samples;
  doc["all_pass"] = report.all_pass();
  doc["failures"] = report.failures();
  doc["max_rel_error"] = report.max_rel_error();
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["sample"] = r.sample;
    j["inputs"] = r.inputs;
    j["lhs"] = format_complex(r.lhs);
    j["rhs"] = format_complex(r.rhs);
    j["rel_error"] = std::isfinite(r.rel_error) ? nlohmann::ordered_json(r.rel_error) : nlohmann::ordered_json("inf");
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    rows.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << "suite,check,sample,inputs,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,tolerance,pass\n";
  for (const auto& r : report.rows) {
    std::string inputs = r.inputs;
    std::replace(inputs.begin(), inputs.end(), '"', '\'');
    os << r.suite << ',' << r.check << ',' << r.sample << ",\"" << inputs << "\"," << format_real(r.lhs.real()) << ','
       << format_real(r.lhs.imag()) << ',' << format_real(r.rhs.real()) << ',' << format_real(r.rhs.imag()) << ','
       << format_real(r.rel_error) << ',' << format_real(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string summary_line(const SuiteReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "suite=%s n=%d samples=%zu rows=%zu failures=%zu max_rel_error=%.3g", report.suite.c_str(),
                report.n, report.samples, report.rows.size(), report.failures(), report.max_rel_error());
  return buf;
}

}  // namespace nvk
