#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace atv {

struct BatteryOptions {
  std::filesystem::path configs_dir = "configs";
  std::filesystem::path out_dir = "suite_out";
  bool full_size = true;  // include the N=501 reproduction run
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Executes the acceptance battery (one result per criterion, in order).
/// Artifacts land under out_dir; bundled experiment configs are read from
/// configs_dir.
std::vector<CriterionResult> run_acceptance_battery(const BatteryOptions& opt);

}  // namespace atv
