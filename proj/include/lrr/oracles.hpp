#pragma once

#include <string>
#include <vector>

namespace lrr {

// One independent numerical check of a closed-form building block against a
// brute-force or first-principles computation.
struct OracleEntry {
  std::string name;
  double observed = 0.0;   // worst violation seen (check-specific meaning)
  double tolerance = 0.0;
  bool passed = false;
};

struct OracleReport {
  std::vector<OracleEntry> entries;
  bool all_passed() const;
};

// Runs every oracle with fixed internal seeds; deterministic.
OracleReport run_oracle_suite();

std::string format(const OracleReport& report);

}  // namespace lrr
