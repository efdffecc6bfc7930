// The end-to-end acceptance suite: ten criteria covering constants, spectral
// identities, the quadratic form, the F_script table, coercivity, combinatorics, the
// simulation expansion, solver properties, symmetries and gauge fixing.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "strichartz/report.hpp"

namespace strichartz {

inline constexpr int kCriterionCount = 10;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<Check> checks;
  std::string error;  // set when the criterion threw
};

CriterionResult run_criterion(int id);
// Runs the selected criteria (all when `only` is empty) in ascending order.
std::vector<CriterionResult> run_acceptance(const std::set<int>& only = {});

// One line per criterion: "criterion 3 [quadratic form]: PASS (1.2 s)".
std::string summary_line(const CriterionResult& r);

}  // namespace strichartz
