#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace maxcorr::verify {

/// One checked quantity. Inequalities are encoded as a violation amount
/// against expected 0; ranges as midpoint plus half-width.
struct VerifyCase {
  std::string id;
  int criterion = 0;
  std::string suite;
  std::string source;  // "reference" (published value) or "oracle" (independent computation)
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Criterion {
  int number = 0;
  std::string suite;
  std::string title;
  double runtime_limit_s = 0.0;
  std::function<std::vector<VerifyCase>()> run;
};

const std::vector<Criterion>& criteria();

const std::vector<std::string>& suite_names();  // paper-core, stable, subsets, estimators, all

struct VerifySuiteResult {
  std::vector<VerifyCase> cases;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

/// Runs every criterion registered under `suite` ("all" runs everything).
/// Unknown names raise BadIndices.
VerifySuiteResult run_suite(std::string_view suite);

}  // namespace maxcorr::verify
