#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strichartz/constants.hpp"
#include "strichartz/errors.hpp"

using namespace strichartz;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("constants") {
  TEST_CASE("Strichartz constants") {
    CHECK(strichartz_constant(1) == doctest::Approx(0.5773502691896258).epsilon(1e-15));
    CHECK(strichartz_constant(2) == 0.5);
    CHECK(strichartz_constant_quadrature(1) == doctest::Approx(strichartz_constant(1)).epsilon(1e-11));
    CHECK(strichartz_constant_quadrature(2) == doctest::Approx(strichartz_constant(2)).epsilon(1e-11));
    CHECK_THROWS_AS(strichartz_constant(3), DomainError);
  }

  TEST_CASE("D_1 series") {
    CHECK(std::round(d1_series(200) * 1e4) / 1e4 == 0.0867);
    CHECK(d1_series(200) == doctest::Approx(d1_spectral(200)).epsilon(1e-12));
    CHECK(std::abs(d1_series(400) - d1_series(200)) < 1e-6);
    // positive terms decaying geometrically with ratio 4/9
    for (int n = 1; n < 30; ++n) CHECK(d1_series(n + 1) > d1_series(n));
    CHECK(d1_term_ratio(300) == doctest::Approx(4.0 / 9.0).epsilon(1e-2));
    CHECK(d1_term_ratio(50) > 0.0);
    CHECK(d1_term_ratio(50) < 1.0);
  }

  TEST_CASE("D_2 closed form and integral route") {
    CHECK(d2_closed() == doctest::Approx(std::log(4.0 / 3.0) / (2 * kPi)).epsilon(1e-15));
    const IntegralResult r = d2_integral();
    CHECK(r.value == doctest::Approx(d2_closed()).epsilon(1e-9));
    CHECK(std::abs(r.tail) > 0.0);
    CHECK(r.tail_error < 1e-10);
    // the integrand is even in t
    for (double t : {0.3, 2.0, 17.0}) CHECK(d2_integrand(t) == doctest::Approx(d2_integrand(-t)));
    CHECK_THROWS_AS(d2_integral(2.0, 1e-12), NumericalError);
  }

  TEST_CASE("logarithmic integrals") {
    CHECK(log_integral_unit().value == doctest::Approx(2 * kPi * std::log(2.0)).epsilon(1e-11));
    CHECK(log_integral_scaled().value == doctest::Approx(6 * kPi * std::log(2.0)).epsilon(1e-11));
  }

  TEST_CASE("Duhamel pairing reproduces both constants") {
    const DuhamelPairing p1 = d_n_duhamel(1, 96, 64);
    CHECK(p1.value == doctest::Approx(d1_series(400)).epsilon(1e-7));
    CHECK(p1.im_form == doctest::Approx(p1.value).epsilon(1e-13));
    const DuhamelPairing p2 = d_n_duhamel(2, 64, 64);
    CHECK(p2.value == doctest::Approx(d2_closed()).epsilon(1e-7));
    CHECK_THROWS_AS(d_n_duhamel(1, 16, 64), DomainError);
  }
}
