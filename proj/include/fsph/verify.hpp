#pragma once

#include <string>
#include <vector>

namespace fsph {

// Knobs of the self-verification suite.  tol_scale multiplies every pinned
// tolerance (including the runtime budgets), so 0.01 reruns the suite 100x
// tighter.  band_limit = 0 keeps the library defaults; a positive value
// forces the working band limit of the sampled checks (random test functions
// and resampled extremizers), which makes under-resolution visible as honest
// failures.  seed drives every randomized check deterministically.
struct VerifyOptions {
  double tol_scale = 1.0;
  int band_limit = 0;
  unsigned int seed = 20260825;
};

// One measured quantity compared against its pinned tolerance.
struct CriterionCheck {
  std::string label;
  double measured = 0.0;
  double tolerance = 0.0;  // already scaled by tol_scale
  bool pass = false;
};

struct CriterionReport {
  int index = 0;
  std::string title;
  std::vector<CriterionCheck> checks;
  double seconds = 0.0;
  bool pass = false;  // conjunction of the checks
};

struct VerifySummary {
  std::vector<CriterionReport> reports;
  bool all_pass = false;
};

// Runs one numbered criterion (1..10).  Throws std::invalid_argument for an
// unknown index or invalid options.
CriterionReport run_criterion(int index, const VerifyOptions& opts = {});

// Runs all ten criteria in order.
VerifySummary run_all_criteria(const VerifyOptions& opts = {});

// Human-readable block: one status line for the criterion followed by one
// line per check.
std::string render_report(const CriterionReport& report);

}  // namespace fsph
