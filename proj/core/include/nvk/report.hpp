#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nvk/quadrature.hpp"

namespace nvk {

/// One verified identity at one sample. rel_error = |lhs - rhs| / |rhs|
/// except for rows whose rhs is zero, which use |lhs - rhs|.
struct ReportRow {
  std::string suite;
  std::string check;
  std::size_t sample = 0;
  std::string inputs;
  cplx lhs;
  cplx rhs;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  std::string suite;
  /// Number of variables; 0 picks the suite default.
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 20;
  unsigned jobs = 1;
  QuadratureConfig cfg;
};

struct SuiteReport {
  std::string suite;
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<ReportRow> rows;

  bool all_pass() const;
  double max_rel_error() const;
  std::size_t failures() const;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs a verification suite. Samples are independent: sample s draws from
/// a generator seeded by (seed, s), so results do not depend on `jobs`.
/// Rows are ordered by sample index, then by check. Throws
/// std::invalid_argument for an unknown suite or unsupported n.
SuiteReport run_suite(const SuiteOptions& options);

std::string to_json(const SuiteReport& report);
/// Header: suite,check,sample,inputs,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,tolerance,pass
std::string to_csv(const SuiteReport& report);
/// "suite=ladder n=3 samples=20 rows=80 failures=0 max_rel_error=1.2e-12"
std::string summary_line(const SuiteReport& report);

}  // namespace nvk
