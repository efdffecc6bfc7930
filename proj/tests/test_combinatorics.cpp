#include <doctest.h>

#include <cmath>

#include "strichartz/combinatorics.hpp"
#include "strichartz/errors.hpp"

using namespace strichartz;

TEST_SUITE("combinatorics") {
  TEST_CASE("exact binomial coefficients") {
    CHECK(binomial_string(10, 3) == "120");
    CHECK(binomial_string(0, 0) == "1");
    CHECK(binomial_string(60, 30) == "118264581564861424");
    CHECK(binomial_string(100, 50) == "100891344545564193334812497256");
  }

  TEST_CASE("central binomial bound holds with equality only at m = 1") {
    const CentralBinomialReport r = central_binomial_bound_check(60);
    CHECK(r.all_hold);
    CHECK(r.rows.size() == 60u);
    CHECK(r.equality_at == std::vector<int>{1});
    for (const auto& row : r.rows) CHECK(row.slack_ratio >= 1.0);
  }

  TEST_CASE("binomial-sum inequality for all j") {
    const CombinatoricsReport r = combinatorics_check(25);
    CHECK(r.all_hold);
    CHECK(r.failures == 0);
    std::size_t expected = 0;
    for (int m = 1; m <= 25; ++m) expected += m + 1;
    CHECK(r.rows.size() == expected);
    for (const auto& row : r.rows) {
      CHECK(row.holds);
      CHECK(row.ratio <= 1.0);
    }
  }

  TEST_CASE("bad ranges") {
    CHECK_THROWS_AS(combinatorics_check(0), DomainError);
    CHECK_THROWS_AS(binomial_string(3, 5), DomainError);
  }
}
