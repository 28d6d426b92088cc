#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mtlrc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the end-to-end validation suite (fixed-point exactness, sub-root
// certification, rate reproduction, upper/lower sandwich, oracle equivalence,
// local/global coupling, moment identities, concentration experiment, ERM
// oracle match, bound-holds experiment, constant integrity, crossover),
// printing one pass/fail line per criterion. Returns all results; overall
// success iff every criterion passed.
std::vector<CriterionResult> run_validation(std::uint64_t seed, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace mtlrc
