#pragma once

#include "lieac/evolution.hpp"

namespace lieac {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measure = 0.0;  // quantity compared against threshold
  double threshold = 0.0;
  std::string detail;
};

// Named invariant suite: rule-i .. rule-v (logarithmic-derivative
// calculus), det-oracle, orthogonality, subdivision-decay, inclusion.
// Invariants the spec's group cannot express run on built-in witnesses
// (noted in detail). Pure given the inputs and seed.
std::vector<CheckResult> run_checks(const GroupPtr& G, const LpElement& gamma,
                                    const EvolConfig& cfg, uint64_t seed);

}  // namespace lieac
