// nvk: evaluate, transform, verify and classify representation data.
//
// Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nvk/complex_format.hpp"
#include "nvk/conditions.hpp"
#include "nvk/convex_transform.hpp"
#include "nvk/descriptor.hpp"
#include "nvk/errors.hpp"
#include "nvk/random.hpp"
#include "nvk/report.hpp"
#include "nvk/representation.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

json real_or_string(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

nvk::QuadratureConfig make_config(std::optional<double> tol) {
  nvk::QuadratureConfig cfg;
  if (tol) cfg.rel_tol = *tol;
  cfg.validate();
  return cfg;
}

int cmd_eval(const std::string& file, const std::vector<std::string>& points, std::optional<double> tol,
             const std::string& path) {
  const nvk::RepresentationData data = nvk::parse_descriptor(read_file(file));
  const nvk::QuadratureConfig cfg = make_config(tol);
  const nvk::Reduction reduction = path == "quadrature" ? nvk::Reduction::Quadrature : nvk::Reduction::ClosedForm;
  if (points.empty()) throw UsageError("eval: at least one --z is required");
  int status = kExitOk;
  for (const std::string& text : points) {
    const std::vector<nvk::cplx> coords = nvk::parse_complex_list(text);
    const nvk::PolyUpperPoint z(coords);
    const nvk::EvalResult r = nvk::evaluate(data, z, cfg, reduction);
    json line;
    line["z"] = json::array();
    for (const auto& c : coords) line["z"].push_back(nvk::format_complex(c));
    line["value"] = nvk::format_complex(r.value);
    line["re"] = real_or_string(r.value.real());
    line["im"] = real_or_string(r.value.imag());
    line["error_estimate"] = real_or_string(r.error_estimate);
    line["converged"] = r.converged;
    std::cout << line.dump() << "\n";
    if (!r.converged) status = kExitNumerical;
  }
  if (status != kExitOk) std::cerr << "nvk: error: quadrature did not converge\n";
  return status;
}

int cmd_transform(const std::string& file, const std::string& k_text, const std::string& out) {
  const nvk::RepresentationData data = nvk::parse_descriptor(read_file(file));
  const std::vector<double> k = nvk::parse_real_list(k_text);
  const nvk::RepresentationData tr = nvk::transform_general(data, k);
  write_output(out, nvk::write_descriptor(tr) + "\n");
  return kExitOk;
}

int cmd_verify(const nvk::SuiteOptions& opts, const std::string& format, const std::string& out) {
  const nvk::SuiteReport rep = nvk::run_suite(opts);
  const std::string text = format == "csv" ? nvk::to_csv(rep) : nvk::to_json(rep);
  write_output(out, text);
  const bool to_stdout = out.empty() || out == "-";
  (to_stdout ? std::cerr : std::cout) << nvk::summary_line(rep) << "\n";
  return rep.all_pass() ? kExitOk : kExitNumerical;
}

int cmd_classify(double alpha, double beta, double gamma, double delta, const std::string& mu_file,
                 std::optional<double> tol) {
  const nvk::Measure mu1 = nvk::parse_measure_document(read_file(mu_file));
  if (mu1.dimension() != 1) throw UsageError("classify: --mu must describe a one-dimensional measure");
  const nvk::ClassifyOutcome c = nvk::classify_measure(alpha, beta, gamma, delta, mu1, make_config(tol));
  json out;
  out["case"] = std::string(nvk::to_string(c.classification.structural_case));
  switch (c.classification.verdict) {
    case nvk::Verdict::Representing: out["representing"] = true; break;
    case nvk::Verdict::NotRepresenting: out["representing"] = false; break;
    case nvk::Verdict::Indeterminate: out["representing"] = "indeterminate"; break;
  }
  if (!c.classification.reason.empty()) out["reason"] = c.classification.reason;
  json ev;
  ev["growth_converges"] = c.evidence.growth_converges();
  ev["growth_value"] = c.evidence.growth_converges() ? real_or_string(c.evidence.growth.value.real()) : json("diverged");
  ev["max_nevanlinna_modulus"] = real_or_string(c.evidence.max_nevanlinna_modulus);
  ev["max_nevanlinna_ratio"] = real_or_string(c.evidence.max_nevanlinna_ratio);
  ev["grid_points"] = 25;
  json traits;
  traits["is_zero"] = c.traits.is_zero;
  traits["is_finite"] = c.traits.is_finite;
  traits["satisfies_1var_growth"] = c.traits.satisfies_1var_growth;
  traits["satisfies_cubic_condition"] =
      c.traits.satisfies_cubic_condition ? json(*c.traits.satisfies_cubic_condition) : json(nullptr);
  ev["traits"] = traits;
  out["evidence"] = ev;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Herglotz-Nevanlinna representations and convex combinations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nvk 0.1.0");

  std::optional<double> tol;

  auto* eval = app.add_subcommand("eval", "Evaluate q(z) from a descriptor");
  std::string eval_file;
  std::vector<std::string> eval_points;
  std::string eval_path = "closed-form";
  eval->add_option("descriptor", eval_file, "Descriptor JSON file")->required();
  eval->add_option("--z", eval_points, "Point as comma-separated a+bi literals (repeatable)")->required();
  eval->add_option("--tol", tol, "Relative quadrature tolerance");
  eval->add_option("--path", eval_path, "Inner integrations: closed-form or quadrature")
      ->check(CLI::IsMember({"closed-form", "quadrature"}));

  auto* transform = app.add_subcommand("transform", "Write the descriptor of z -> q(sum k_l z_l)");
  std::string tr_file, tr_k, tr_out;
  transform->add_option("descriptor", tr_file, "Descriptor JSON file")->required();
  transform->add_option("--k", tr_k, "Convex weights, comma-separated")->required();
  transform->add_option("--out", tr_out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  nvk::SuiteOptions vopts;
  std::optional<std::uint64_t> seed;
  std::string format = "json", vout;
  verify->add_option("--suite", vopts.suite, "ladder, main, conditions or kernels")->required();
  verify->add_option("--n", vopts.n, "Number of variables (suite default if omitted)");
  verify->add_option("--seed", seed, "Random seed (overrides NVK_SEED)");
  verify->add_option("--samples", vopts.samples, "Random draws")->check(CLI::Range(1, 100000));
  verify->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", vout, "Report file (default stdout)");
  verify->add_option("--jobs", vopts.jobs, "Worker threads")->check(CLI::Range(1, 256));
  verify->add_option("--tol", tol, "Relative quadrature tolerance");

  auto* classify = app.add_subcommand("classify", "Classify a two-variable pushforward measure");
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  std::string mu_file;
  classify->add_option("--alpha", alpha)->required();
  classify->add_option("--beta", beta)->required();
  classify->add_option("--gamma", gamma)->required();
  classify->add_option("--delta", delta)->required();
  classify->add_option("--mu", mu_file, "Base measure: bare measure object or full descriptor")->required();
  classify->add_option("--tol", tol, "Relative quadrature tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_file, eval_points, tol, eval_path);
    if (*transform) return cmd_transform(tr_file, tr_k, tr_out);
    if (*verify) {
      vopts.seed = seed ? *seed : nvk::default_seed();
      vopts.cfg = make_config(tol);
      return cmd_verify(vopts, format, vout);
    }
    if (*classify) return cmd_classify(alpha, beta, gamma, delta, mu_file, tol);
  } catch (const nvk::QuadratureError& e) {
    std::cerr << "nvk: error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "nvk: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "nvk: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "nvk: error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
