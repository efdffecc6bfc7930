// Exact-integer verification of two binomial inequalities used by the tail
// bounds: C(2m,m) sqrt(3m+1) <= 4^m, and for 0 <= j <= m
//   2 sum_{k <= m, j+k even} C(j+k, j) C(2m-j-k, m-j) <= C(2m+1, m+1) + C(2m, m).
#pragma once

#include <string>
#include <vector>

namespace strichartz {

struct CentralBinomialRow {
  int m = 0;
  bool holds = false;
  bool equality = false;
  // 16^m / (C(2m,m)^2 (3m+1)), for display only
  double slack_ratio = 0.0;
};

struct CentralBinomialReport {
  int m_max = 0;
  std::vector<CentralBinomialRow> rows;
  bool all_hold = false;
  std::vector<int> equality_at;
};

CentralBinomialReport central_binomial_bound_check(int m_max);

struct CombinatoricsRow {
  int m = 0;
  int j = 0;
  std::string lhs;  // decimal digits of 2 * sum
  std::string rhs;  // decimal digits of C(2m+1, m+1) + C(2m, m)
  double ratio = 0.0;
  bool holds = false;
};

struct CombinatoricsReport {
  int m_max = 0;
  std::vector<CombinatoricsRow> rows;
  bool all_hold = false;
  int failures = 0;
};

CombinatoricsReport combinatorics_check(int m_max);

// C(n, k) as a decimal string, for reporting and tests.
std::string binomial_string(int n, int k);

}  // namespace strichartz
