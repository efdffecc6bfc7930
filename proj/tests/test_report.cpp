#include <doctest.h>

#include <cmath>
#include <limits>

#include "strichartz/errors.hpp"
#include "strichartz/report.hpp"

using namespace strichartz;

TEST_SUITE("report") {
  TEST_CASE("serialization: sorted keys and 15 significant digits") {
    const Json j = {{"zeta", 1.0}, {"alpha", 1.0 / 3.0}, {"mid", {{"b", 3}, {"a", -2.5e-20}}}};
    const std::string s = serialize(j);
    CHECK(s.find("\"alpha\"") < s.find("\"mid\""));
    CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
    CHECK(s.find("\"a\"") < s.find("\"b\""));
    CHECK(s.find("0.333333333333333") != std::string::npos);
    CHECK(s.find("0.3333333333333333") == std::string::npos);
    CHECK(s.find("1.0") != std::string::npos);
    CHECK(s.find("-2.5e-20") != std::string::npos);
    CHECK(s.find("\"b\": 3") != std::string::npos);
    const std::string special = serialize(Json{{"x", std::numeric_limits<double>::quiet_NaN()}});
    CHECK(special.find("\"nan\"") != std::string::npos);
    // the output is valid JSON that reads back to the same values
    const Json back = Json::parse(s);
    CHECK(back["alpha"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("checks and pass state") {
    Report r("unit");
    CHECK(r.check_close("close", 1.0, 1.0 + 1e-12, 1e-10));
    CHECK(r.passed());
    CHECK_FALSE(r.check_close("far", 1.0, 2.0, 0.1));
    CHECK_FALSE(r.passed());
    CHECK_FALSE(r.check_close("nan", std::nan(""), 1.0, 1.0));
    const Json j = r.to_json();
    for (const char* key : {"command", "version", "inputs", "outputs", "references", "checks", "passed", "elapsed_ms"})
      CHECK(j.contains(key));
    CHECK(j["checks"].size() == 3u);
    CHECK(j["checks"][0]["tolerance"].get<double>() == 1e-10);
  }

  TEST_CASE("reports are byte-identical for identical content") {
    auto make = [] {
      Report r("unit");
      r.input("dim", 2);
      r.output("value", 0.1 + 0.2);
      r.reference("value", 0.3);
      r.check_close("value", 0.1 + 0.2, 0.3, 1e-15);
      r.set_elapsed_ms(12.5);
      return r.dump();
    };
    CHECK(make() == make());
  }

  TEST_CASE("state round trip") {
    SpectralState s(2, 3);
    s[0] = {1.0, -0.5};
    s[4] = {0.25, 3.0};
    const SpectralState back = state_from_json(Json::parse(serialize(state_to_json(s))));
    CHECK(back.dim() == 2);
    CHECK(back.cutoff() == 3);
    CHECK(max_abs_difference(back, s) == 0.0);
    CHECK_THROWS_AS(state_from_json(Json{{"dim", 1}}), DomainError);
    CHECK_THROWS_AS(state_from_json(Json{{"dim", 1}, {"cutoff", 2}, {"coeffs", {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}}),
                    DomainError);
  }
}
