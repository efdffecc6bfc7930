#include "strichartz/combinatorics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "strichartz/errors.hpp"

namespace strichartz {
namespace {

using boost::multiprecision::cpp_int;

// Row-by-row Pascal table up to n_max.
class BinomialTable {
 public:
  explicit BinomialTable(int n_max) : rows_(n_max + 1) {
    for (int n = 0; n <= n_max; ++n) {
      rows_[n].assign(n + 1, cpp_int(1));
      for (int k = 1; k < n; ++k) rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
    }
  }
  const cpp_int& operator()(int n, int k) const { return rows_[n][k]; }

 private:
  std::vector<std::vector<cpp_int>> rows_;
};

double as_ratio(const cpp_int& a, const cpp_int& b) {
  return static_cast<double>(boost::multiprecision::cpp_bin_float_50(a) / boost::multiprecision::cpp_bin_float_50(b));
}

}  // namespace

std::string binomial_string(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("binomial_string: need 0 <= k <= n");
  cpp_int v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v.str();
}

CentralBinomialReport central_binomial_bound_check(int m_max) {
  if (m_max < 1) throw DomainError("central_binomial_bound_check: m_max must be >= 1");
  const BinomialTable c(2 * m_max);
  CentralBinomialReport rep;
  rep.m_max = m_max;
  rep.all_hold = true;
  cpp_int sixteen_pow = 1;
  for (int m = 1; m <= m_max; ++m) {
    sixteen_pow *= 16;
    const cpp_int lhs = c(2 * m, m) * c(2 * m, m) * (3 * m + 1);
    CentralBinomialRow row;
    row.m = m;
    row.holds = lhs <= sixteen_pow;
    row.equality = lhs == sixteen_pow;
    row.slack_ratio = as_ratio(sixteen_pow, lhs);
    if (!row.holds) rep.all_hold = false;
    if (row.equality) rep.equality_at.push_back(m);
    rep.rows.push_back(row);
  }
  return rep;
}

CombinatoricsReport combinatorics_check(int m_max) {
  if (m_max < 1) throw DomainError("combinatorics_check: m_max must be >= 1");
  const BinomialTable c(2 * m_max + 1);
  CombinatoricsReport rep;
  rep.m_max = m_max;
  for (int m = 1; m <= m_max; ++m) {
    const cpp_int rhs = c(2 * m + 1, m + 1) + c(2 * m, m);
    for (int j = 0; j <= m; ++j) {
      cpp_int sum = 0;
      for (int k = j % 2; k <= m; k += 2) sum += c(j + k, j) * c(2 * m - j - k, m - j);
      const cpp_int lhs = 2 * sum;
      CombinatoricsRow row{m, j, lhs.str(), rhs.str(), as_ratio(lhs, rhs), lhs <= rhs};
      if (!row.holds) ++rep.failures;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.all_hold = rep.failures == 0;
  return rep;
}

}  // namespace strichartz
