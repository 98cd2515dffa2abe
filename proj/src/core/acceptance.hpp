#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rmtlab {

struct AcceptanceConfig {
  std::uint64_t seed = 20240601;
  double scale = 1.0;  // multiplies path and draw counts; 1 is the full-size check
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool errored = false;  // the check threw; detail holds the message
  double seconds = 0.0;
  std::string detail;  // human-readable headline numbers
  std::string digest;  // full-precision statistics, for determinism comparisons
};

inline constexpr int kCriterionCount = 14;

const char* criterion_name(int id);

/// Runs one acceptance criterion (1..14). Never throws for numerical trouble;
/// failures are reported in the result.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg);

}  // namespace rmtlab
