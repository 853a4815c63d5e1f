#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace kexp {

struct SuiteResult {
  std::string name;
  std::string group;  // identity, inequality, round-trip, field, control
  long samples = 0;
  double max_defect = 0.0;
  double bound = 0.0;
  bool pass = true;
  json detail = json::object();
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool pass = true;
  double seconds = 0.0;
  json to_json(const VerifyConfig& cfg) const;
  std::vector<std::string> failing() const;
};

/// Names of every registered suite in execution order.
std::vector<std::string> suite_names();

/// Runs the selected suites on every (d, N) grid of the config. Samples are
/// spread over the worker pool and merged by index.
/// Throws ConfigError when a requested suite does not exist.
VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace kexp
