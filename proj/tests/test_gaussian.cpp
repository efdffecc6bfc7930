#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/quadrature.hpp"

using namespace strichartz;

namespace {
constexpr double kPi = std::numbers::pi;

SpectralState random_state(int dim, int cutoff, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralState s(dim, cutoff);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {normal(rng), normal(rng)};
  return s;
}
}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("G_0 has unit mass and the right point values") {
    for (int dim = 1; dim <= 2; ++dim) {
      const SpectralState g = gaussian_datum(dim, 8);
      CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-14));
      const double expect = std::pow(kPi, -dim / 4.0) * std::exp(-0.5 * (0.49 + (dim == 2 ? 0.09 : 0.0)));
      CHECK(std::abs(evaluate(g, 0.7, 0.3) - expect) <= 1e-14);
    }
  }

  TEST_CASE("the oscillator flow rotates G_0 by a phase and conserves mass") {
    for (int dim = 1; dim <= 2; ++dim) {
      const SpectralState g = gaussian_datum(dim, 6);
      for (double tau : {-1.2, 0.3, kPi / 2}) {
        SpectralState expect = g;
        expect *= std::polar(1.0, -0.5 * dim * tau);
        CHECK(max_abs_difference(harmonic_propagate(g, tau), expect) <= 1e-15);
      }
      const SpectralState s = random_state(dim, dim == 1 ? 20 : 7, 9);
      const SpectralState moved = harmonic_propagate(harmonic_propagate(s, 0.4), 0.9);
      CHECK(moved.mass() == doctest::Approx(s.mass()).epsilon(1e-14));
      CHECK(max_abs_difference(moved, harmonic_propagate(s, 1.3)) <= 1e-12);
    }
  }

  TEST_CASE("half-period identity in coefficient space") {
    for (int dim = 1; dim <= 2; ++dim) {
      const SpectralState s = random_state(dim, dim == 1 ? 16 : 6, 21);
      for (double tau : {-0.8, 0.25, 1.1})
        CHECK(max_abs_difference(harmonic_propagate(s, kPi + tau), half_period_propagate(s, tau)) <= 1e-12);
      CHECK(max_abs_difference(reflect(reflect(s)), s) == 0.0);
    }
  }

  TEST_CASE("lens map sends the physical Gaussian to its harmonic-frame image") {
    for (int dim = 1; dim <= 2; ++dim)
      for (double tau : {-1.3, -0.2, 0.0, 0.9})
        for (Point y : {Point{0.0, 0.0}, Point{0.6, -1.1}, Point{-2.0, 0.4}}) {
          const LensPoint lp = lens_point_map(dim, tau, y);
          const cplx lhs = lp.factor * physical_gaussian(dim, lp.t, lp.x);
          CHECK(std::abs(lhs - lens_gaussian(dim, tau, y)) <= 1e-14);
          const LensPreimage back = inverse_lens_point_map(dim, lp.t, lp.x);
          CHECK(back.tau == doctest::Approx(tau).epsilon(1e-14).scale(1.0));
          CHECK(std::abs(back.factor * lp.factor - 1.0) <= 1e-13);
        }
    CHECK_THROWS_AS(lens_point_map(1, kPi / 2, Point{0, 0}), DomainError);
  }

  TEST_CASE("Duhamel remainder: projected route matches the 1D closed form") {
    const DuhamelRemainder r(1, 96);
    CHECK(r.representation_error() <= 1e-8);
    for (double tau : {-1.4, -0.5, 0.2, 1.0, 1.5}) {
      CAPTURE(tau);
      CHECK(max_abs_difference(r.at(tau), duhamel_remainder_closed_1d(tau, 96)) <= 1e-9);
      CHECK(max_abs_difference(r.assemble(r.level_integrals(tau)), r.at(tau)) == 0.0);
    }
    CHECK(max_abs_difference(r.at(0.0), SpectralState(1, 96)) == 0.0);
  }

  TEST_CASE("Duhamel remainder: coarse cutoff is reported") {
    CHECK_THROWS_AS(DuhamelRemainder(1, 32), NumericalError);
  }
}
