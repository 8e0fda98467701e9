#pragma once

// Monte Carlo checks of closed-form tail bounds: empirical event
// frequencies against their probability bounds plus an absolute slack.

#include <cstdint>
#include <string>
#include <vector>

namespace lra::bench {

struct SuiteCheck {
  std::string name;
  double frequency = 0;  // empirical frequency of the bad event
  double bound = 0;      // closed-form probability bound of the bad event
  double slack = 0;      // pass iff frequency <= bound + slack
  int trials = 0;
  bool pass = false;
};

struct MonteCarloReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool pass() const;
};

struct MonteCarloOptions {
  std::uint64_t seed = 20240601;
  double trial_scale = 1.0;  // multiplies every trial count (at least 10 trials remain)
  unsigned threads = 1;
};

/// Suites: gauss_norms, preprocess, volume, thm54, thm56, leverage.
MonteCarloReport montecarlo_suite(const std::string& name, const MonteCarloOptions& options = {});
const std::vector<std::string>& montecarlo_suite_names();

std::string format_report(const MonteCarloReport& report);

}  // namespace lra::bench
