#pragma once

#include <string>
#include <vector>

#include "padicl/cli_harness.hpp"

namespace padicl {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const;
  json to_json() const;
};

/// Names accepted by the verify verb.
const std::vector<std::string>& suite_names();
/// Runs a named suite; also accepts the internal suites slopes and admissibility.
SuiteReport run_suite(const std::string& name, Session& s);

}  // namespace padicl
