// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "nvk/conditions.hpp"
#include "nvk/convex_transform.hpp"
#include "nvk/descriptor.hpp"
#include "nvk/kernels.hpp"
#include "nvk/ladder_verify.hpp"
#include "nvk/quadrature.hpp"
#include "nvk/random.hpp"
#include "nvk/report.hpp"
#include "nvk/representation.hpp"
#include "nvk/residue_oracle.hpp"

using namespace nvk;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double rel(cplx got, cplx want) {
  const double d = std::abs(got - want);
  return want == cplx{} ? d : d / std::abs(want);
}

// Collects the worst error of each named check against its tolerance.
class Tally {
 public:
  void add(const std::string& name, double err, double tol) {
    for (Item& it : items_) {
      if (it.name == name) {
        it.worst = std::max(it.worst, err);
        return;
      }
    }
    items_.push_back({name, err, tol});
  }
  void require(const std::string& name, bool ok) { add(name, ok ? 0.0 : 1.0, 0.0); }
  bool pass() const {
    for (const Item& it : items_) {
      if (!(it.worst <= it.tol)) return false;
    }
    return true;
  }
  std::string detail() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const Item& it = items_[i];
      os << (i ? "; " : "") << it.name;
      if (it.tol > 0.0) {
        os << ' ' << it.worst << " <= " << it.tol;
      } else {
        os << (it.worst == 0.0 ? " ok" : " FAILED");
      }
    }
    return os.str();
  }

 private:
  struct Item {
    std::string name;
    double worst;
    double tol;
  };
  std::vector<Item> items_;
};

std::vector<double> random_b(Rng& rng, std::size_t count) {
  std::vector<double> b(count);
  for (double& x : b) x = rng.uniform(0.3, 3.0);
  return b;
}

std::vector<double> random_t(Rng& rng, std::size_t count, double range) {
  std::vector<double> t(count);
  for (double& x : t) x = rng.uniform(-range, range);
  return t;
}

RepresentationData minus_inverse() { return {0.0, {0.0}, Measure::dirac(0.0, kPi)}; }

RepresentationData random_atomic(Rng& rng) {
  const int count = rng.integer(1, 5);
  std::vector<Atom> atoms;
  for (int j = 0; j < count; ++j) atoms.push_back({{rng.uniform(-5, 5)}, rng.uniform(0.1, 3.0)});
  return {rng.uniform(-2, 2), {rng.uniform(0, 2)}, Measure::atomic(1, std::move(atoms))};
}

cplx weighted_sum(std::span<const double> k, const PolyUpperPoint& z) {
  cplx s = 0.0;
  for (std::size_t l = 0; l < k.size(); ++l) s += k[l] * z[l];
  return s;
}

// 1. Worked example.
void criterion1(Tally& t) {
  Rng rng(101);
  for (int s = 0; s < 10; ++s) {
    const cplx z = rng.upper_point();
    t.add("q(z) = -1/z", rel(eval(minus_inverse(), PolyUpperPoint{z}), -1.0 / z), 1e-12);
  }
  const double k[] = {0.5, 0.5};
  const RepresentationData tr = transform(minus_inverse(), k);
  for (int s = 0; s < 10; ++s) {
    const PolyUpperPoint z = rng.poly_upper_point(2);
    const cplx want = -2.0 / (z[0] + z[1]);
    t.add("closed form", rel(eval(tr, z, {}, Reduction::ClosedForm), want), 1e-12);
    t.add("quadrature", rel(eval(tr, z, {}, Reduction::Quadrature), want), 1e-7);
  }
}

// 2. Kernel-form equivalence.
void criterion2(Tally& t) {
  Rng rng(102);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int s = 0; s < 1000; ++s) {
      const PolyUpperPoint z = rng.poly_upper_point(n);
      const auto tt = random_t(rng, n, 10.0);
      t.add("sum vs rational n=" + std::to_string(n), rel(eval_Kn_sum(z, tt), eval_Kn_rational(z, tt)), 1e-12);
    }
  }
  const double zero[] = {0.0, 0.0};
  const PolyUpperPoint ii{kI, kI};
  t.require("K2((i,i),(0,0)) == i", eval_Kn_sum(ii, zero) == kI && eval_Kn_rational(ii, zero) == kI);
}

// 3. Ladder identities.
void criterion3(Tally& t) {
  Rng rng(103);
  for (auto [m, d] : {std::pair{3, 0}, std::pair{3, 1}, std::pair{4, 0}}) {
    const std::string name = "step m=" + std::to_string(m) + " d=" + std::to_string(d);
    for (int s = 0; s < 20; ++s) {
      const auto b = random_b(rng, static_cast<std::size_t>(m + d - 1));
      const PolyUpperPoint z = rng.poly_upper_point(static_cast<std::size_t>(m + d));
      const auto tt = random_t(rng, static_cast<std::size_t>(m - 1), 5.0);
      t.add(name, verify_step(m, d, b, z, tt).rel_error(), 1e-7);
    }
  }
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int s = 0; s < 20; ++s) {
      const auto b = random_b(rng, n - 1);
      const PolyUpperPoint z = rng.poly_upper_point(n);
      t.add("final step n=" + std::to_string(n), verify_final_step(b, z, rng.uniform(-5, 5)).rel_error(), 1e-7);
    }
  }
  {
    const double b[] = {1.0, 1.0};
    const auto r = verify_full_reduction(b, {kI, 2.0 * kI, 3.0 * kI}, 1.0, ReductionPath::Iterated);
    t.add("iterated n=3 at (i,2i,3i)", rel(r.lhs, kPi * kPi / 3.0 * cplx(-0.3, 0.4)), 1e-6);
  }
  for (std::size_t n = 2; n <= 3; ++n) {
    for (int s = 0; s < 5; ++s) {
      const auto b = random_b(rng, n - 1);
      const PolyUpperPoint z = rng.poly_upper_point(n);
      t.add("iterated n=" + std::to_string(n),
            verify_full_reduction(b, z, rng.uniform(-5, 5), ReductionPath::Iterated).rel_error(), 1e-6);
    }
  }
}

// 4. Main theorem end to end.
void criterion4(Tally& t) {
  Rng rng(104);
  for (int m = 0; m < 5; ++m) {
    const RepresentationData data = random_atomic(rng);
    for (std::size_t n = 2; n <= 3; ++n) {
      const auto k = rng.convex_weights(n);
      std::vector<PolyUpperPoint> zs;
      for (int s = 0; s < 20; ++s) zs.push_back(rng.poly_upper_point(n));
      const auto rep = verify_main_theorem(data, k, zs, false);
      t.add("closed form n=" + std::to_string(n), rep.max_dev_closed_form, 1e-12);
      t.require("sample count", rep.samples == zs.size());
    }
  }
}

// 5. Coefficient algebra.
void criterion5(Tally& t) {
  Rng rng(105);
  for (int s = 0; s < 100; ++s) {
    const auto k = rng.convex_weights(static_cast<std::size_t>(rng.integer(2, 6)));
    const auto back = b_to_k(k_to_b(k));
    double err = 0.0;
    for (std::size_t l = 0; l < k.size(); ++l) err = std::max(err, std::abs(back[l] - k[l]));
    t.add("k -> b -> k", err, 1e-14);
  }
  for (int s = 0; s < 100; ++s) {
    const auto b = random_b(rng, static_cast<std::size_t>(rng.integer(1, 5)));
    t.add("beta_n = det M_n", std::abs(build_Mn(b).determinant() - beta_n(b)) / beta_n(b), 1e-12);
  }
  for (int s = 0; s < 20; ++s) {
    const double b1[] = {rng.uniform(0.1, 10.0)};
    t.require("beta_2 = 1 + b_1", beta_n(b1) == 1.0 + b1[0]);
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    const std::vector<double> ones(n - 1, 1.0);
    t.require("beta_n(1) = n", beta_n(ones) == static_cast<double>(n));
  }
}

// 6. Classification table.
void criterion6(Tally& t) {
  for (const ClassificationFixture& f : classification_fixtures()) {
    const ClassifyOutcome c = classify_measure(f.alpha, f.beta, f.gamma, f.delta, f.base);
    const bool representing = c.classification.verdict == Verdict::Representing;
    t.require(f.name + " label", c.classification.label() == f.expected && representing == f.representing);
    t.require(f.name + " growth evidence", c.evidence.growth_converges() == f.representing);
    t.require(f.name + " nevanlinna evidence", (c.evidence.max_nevanlinna_ratio <= 1e-8) == f.representing);
  }
}

// 7. Residue and quadrature cross-validation.
void criterion7(Tally& t) {
  Rng rng(107);
  for (int s = 0; s < 200; ++s) {
    const int deg = rng.integer(2, 6);
    std::vector<cplx> roots;
    for (int j = 0; j < deg; ++j) {
      cplx r = rng.upper_point(5.0, 0.2, 5.0);
      if (rng.uniform() < 0.5) r = std::conj(r);
      roots.push_back(r);
    }
    std::vector<cplx> num;
    for (int j = 0; j <= deg - 2 - rng.integer(0, deg - 2); ++j) num.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const RationalFunction f(ComplexPolynomial(num), ComplexPolynomial::from_roots(roots));
    const cplx exact = line_integral(f);
    const cplx q = integrate_line([&](double x) { return f(x); }).value;
    t.add("random rational", rel(q, exact), 1e-8);
  }

  SuiteOptions o;
  o.suite = "conditions";
  o.seed = 7;
  o.samples = 20;
  for (const ReportRow& r : run_suite(o).rows) {
    if (r.check.rfind("classify_", 0) == 0) continue;
    t.add(r.check.substr(0, r.check.rfind('_')), r.pass ? 0.0 : r.rel_error, 1e-8);
  }

  // The literal same-sign formula for beta, delta > 0; both negative flips its sign.
  for (int s = 0; s < 20; ++s) {
    const double alpha = rng.uniform(-3, 3), gamma = rng.uniform(-3, 3), t1 = rng.uniform(-3, 3);
    const double beta = rng.uniform(0.3, 3.0), delta = rng.uniform(0.3, 3.0);
    const cplx z1 = rng.upper_point(3.0, 0.2, 5.0), z2 = rng.upper_point(3.0, 0.2, 5.0);
    auto literal = [&](double bb, double dd) {
      const cplx w = (alpha * dd - bb * gamma) * t1 - dd * z1 + bb * std::conj(z2);
      return cplx(0.0, 4.0 * kPi * bb * dd) / (w * w * w);
    };
    t.add("same signs literal, beta,delta > 0",
          rel(line_integral(nevanlinna_auxiliary(alpha, beta, gamma, delta, t1, z1, z2)), literal(beta, delta)), 1e-8);
    t.add("same signs, beta,delta < 0 (mirrored sign)",
          rel(line_integral(nevanlinna_auxiliary(alpha, -beta, gamma, -delta, t1, z1, z2)), -literal(-beta, -delta)),
          1e-8);
  }
}

// 8. Herglotz positivity.
void criterion8(Tally& t) {
  std::vector<std::pair<std::string, RepresentationData>> fixtures;
  fixtures.emplace_back("pi delta_0", minus_inverse());
  const double k2[] = {0.5, 0.5};
  const double k3[] = {0.5, 0.25, 0.25};
  const double k3z[] = {0.25, 0.0, 0.75};
  fixtures.emplace_back("midpoint transform", transform(minus_inverse(), k2));
  fixtures.emplace_back("n=3 transform", transform(minus_inverse(), k3));
  fixtures.emplace_back("n=3 zero weight", transform_general(minus_inverse(), k3z));
  Density g;
  g.fn = [](std::span<const double> x) { return std::exp(-x[0] * x[0]); };
  g.expression = "exp(-t1^2)";
  fixtures.emplace_back("gaussian density", RepresentationData{0.0, {0.0}, Measure::with_density(1, g)});
  Rng rng(108);
  for (int m = 0; m < 3; ++m) {
    const RepresentationData d = random_atomic(rng);
    fixtures.emplace_back("atomic " + std::to_string(m), d);
    fixtures.emplace_back("atomic transform " + std::to_string(m), transform(d, rng.convex_weights(3)));
  }
  for (const ClassificationFixture& f : classification_fixtures()) {
    if (!f.representing) continue;
    fixtures.emplace_back("pushforward " + f.name,
                          RepresentationData{0.0, {0.0, 0.0}, Measure::pushforward_2d(f.base, f.alpha, f.beta, f.gamma, f.delta)});
  }
  std::uint64_t seed = 800;
  for (const auto& [name, data] : fixtures) {
    const HerglotzReport r = check_herglotz(data, 200, seed++);
    t.add("min Im", std::max(0.0, -r.min_imag), 1e-10);
    t.require(name, r.passed && r.failures == 0 && r.samples == 200);
  }
}

// 9. Zero-coefficient corollary.
void criterion9(Tally& t) {
  Rng rng(109);
  const RepresentationData data{0.5, {1.5}, Measure::atomic(1, {{{0.0}, kPi}, {{1.0}, 0.5}, {{-2.0}, 2.0}})};
  const double k10[] = {1.0, 0.0};
  const double k01[] = {0.0, 1.0};
  const RepresentationData a = transform_general(data, k10);
  const RepresentationData b = transform_general(data, k01);
  t.require("(1,0) linear part", a.a == data.a && a.b == std::vector<double>{data.b[0], 0.0});
  t.require("(0,1) linear part", b.a == data.a && b.b == std::vector<double>{0.0, data.b[0]});
  const Measure pa = Measure::product({data.mu, Measure::lebesgue(1)});
  const Measure pb = Measure::product({Measure::lebesgue(1), data.mu});
  for (int s = 0; s < 20; ++s) {
    std::vector<Interval> axes;
    for (int j = 0; j < 2; ++j) {
      const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
      axes.push_back({std::min(x, y), std::max(x, y)});
    }
    const BoxUnion u{Box(axes)};
    t.add("(1,0) measure is mu x lambda", std::abs(mass(a.mu, u).value - mass(pa, u).value), 1e-12);
    t.add("(0,1) measure is lambda x mu", std::abs(mass(b.mu, u).value - mass(pb, u).value), 1e-12);
    const PolyUpperPoint z = rng.poly_upper_point(2);
    t.add("(1,0) q(z1)", rel(eval(a, z), eval(data, PolyUpperPoint{z[0]})), 1e-7);
    t.add("(0,1) q(z2)", rel(eval(b, z), eval(data, PolyUpperPoint{z[1]})), 1e-7);
  }
  for (int s = 0; s < 20; ++s) {
    std::vector<double> k = rng.convex_weights(2);
    k.insert(k.begin() + rng.integer(0, 2), 0.0);
    const PolyUpperPoint z = rng.poly_upper_point(3);
    t.add("n=3 one zero weight", rel(eval(transform_general(data, k), z), eval(data, PolyUpperPoint{weighted_sum(k, z)})), 1e-7);
  }
}

#ifdef NVK_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + NVK_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}
#endif

// 10. Command-line contract (the golden tests cover it in full).
void criterion10(Tally& t) {
  Density g;
  g.fn = [](std::span<const double> x) { return std::exp(-x[0] * x[0]); };
  g.expression = "exp(-t1^2)";
  const double k[] = {0.5, 0.25, 0.25};
  for (const RepresentationData& d :
       {minus_inverse(), transform(minus_inverse(), k), RepresentationData{0.0, {0.0}, Measure::with_density(1, g)}}) {
    const std::string text = write_descriptor(d);
    t.require("descriptor round trip", write_descriptor(parse_descriptor(text)) == text);
  }
  SuiteOptions o;
  o.suite = "ladder";
  o.n = 3;
  o.seed = 42;
  o.samples = 4;
  const std::string one = to_json(run_suite(o));
  o.jobs = 4;
  t.require("seeded report is deterministic", to_json(run_suite(o)) == one);
#ifdef NVK_CLI_PATH
  const std::string data = std::string(NVK_TEST_DATA_DIR) + "/";
  t.require("exit 0 on success", run_cli("eval \"" + data + "pi_delta0.json\" --z 0+1i") == 0);
  t.require("exit 2 on a usage error", run_cli("eval --nope") == 2);
  t.require("exit 2 on a domain error", run_cli("eval \"" + data + "pi_delta0.json\" --z 0-1i") == 2);
  t.require("exit 2 on a bad descriptor", run_cli("eval \"" + data + "bad_schema.json\" --z 0+1i") == 2);
  t.require("exit 3 on a numerical failure", run_cli("eval \"" + data + "lebesgue_growth.json\" --z 0+1i") == 3);
#endif
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Tally&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "worked example", criterion1},
      {2, "kernel-form equivalence", criterion2},
      {3, "ladder identities", criterion3},
      {4, "main theorem end to end", criterion4},
      {5, "coefficient algebra", criterion5},
      {6, "classification table", criterion6},
      {7, "residue and quadrature cross-validation", criterion7},
      {8, "herglotz positivity", criterion8},
      {9, "zero-coefficient corollary", criterion9},
      {10, "command-line contract", criterion10},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Tally t;
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
      ok = t.pass();
      detail = t.detail();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s) [%.1fs]: %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
