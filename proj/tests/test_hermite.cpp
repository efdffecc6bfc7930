#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "strichartz/errors.hpp"
#include "strichartz/hermite.hpp"
#include "strichartz/quadrature.hpp"

using namespace strichartz;

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);

// H_n(y) e^{-y^2/2} / sqrt(2^n n!) from the physicists' polynomial recurrence.
double oracle(int n, double y) {
  double h0 = 1.0, h1 = 2.0 * y;
  if (n == 0) return std::exp(-y * y / 2);
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1 * std::exp(-y * y / 2) / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0));
}
}  // namespace

TEST_SUITE("hermite") {
  TEST_CASE("basis functions agree with the polynomial recurrence and have norm^2 sqrt(pi)") {
    for (int n = 0; n <= 12; ++n)
      for (double y : {-2.5, -0.3, 0.0, 1.1, 3.0}) CHECK(hermite_function(n, y) == doctest::Approx(oracle(n, y)).epsilon(1e-12).scale(1.0));
    const QuadratureRule& rule = cached_gauss_hermite_rule(60);
    for (int n = 0; n < 40; ++n)
      for (int m = n; m < 40; m += 3) {
        double s = 0.0;
        for (int i = 0; i < rule.order; ++i)
          s += rule.scaled_weights[i] * hermite_function(n, rule.nodes[i]) * hermite_function(m, rule.nodes[i]);
        CHECK(s == doctest::Approx(n == m ? kSqrtPi : 0.0).scale(1.0).epsilon(1e-12));
      }
  }

  TEST_CASE("eigenfunction relation by finite differences") {
    const double h = 1e-3;
    for (int n = 0; n < 15; ++n)
      for (double y : {-1.7, 0.4, 2.2}) {
        const double f = hermite_function(n, y);
        const double lap = (hermite_function(n, y + h) - 2 * f + hermite_function(n, y - h)) / (h * h);
        CHECK(-lap + y * y * f == doctest::Approx((2.0 * n + 1.0) * f).scale(1.0).epsilon(1e-4));
      }
  }

  TEST_CASE("vectorized evaluation is stable far from the origin") {
    std::vector<double> v = hermite_functions(200, 18.0);
    for (int n = 0; n < 200; ++n) CHECK(std::isfinite(v[n]));
    CHECK(v[199] == doctest::Approx(hermite_function(199, 18.0)).epsilon(1e-10));
  }

  TEST_CASE("closed forms against quadrature") {
    for (int j = 0; j <= 30; ++j) {
      const QuadratureRule rule = gaussian_scaled_rule(j + 8, 2.0);
      double s = 0.0;
      for (int i = 0; i < rule.order; ++i) s += rule.scaled_weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]) * std::pow(hermite_function(j, rule.nodes[i]), 2);
      CHECK(wang_diagonal(j) == doctest::Approx(s).epsilon(1e-10));
    }
    const QuadratureRule rule = gaussian_scaled_rule(40, 3.0);
    for (int j = 0; j <= 15; ++j)
      CHECK(alpha_coefficient(j) == doctest::Approx(alpha_by_quadrature(2 * j, rule)).scale(1.0).epsilon(1e-9));
    CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)));
  }

  TEST_CASE("spectral state layout, mass and inner product") {
    SpectralState s(2, 5);
    CHECK(s.size() == 25u);
    s.at(EigenIndex::of(1, 3)) = {2.0, 0.0};
    CHECK(s.flat_index(EigenIndex::of(1, 3)) == 8u);
    CHECK(s.index_of(8).j == 1);
    CHECK(s.index_of(8).k == 3);
    CHECK(EigenIndex::of(1, 3).eigenvalue() == 10.0);
    CHECK(s.mass() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(s.inner(s).real() == doctest::Approx(s.mass()));
    const SpectralState bigger = s.resized(7);
    CHECK(bigger.at(EigenIndex::of(1, 3)) == cplx(2.0, 0.0));
    CHECK(bigger.mass() == doctest::Approx(s.mass()));
    CHECK_THROWS_AS(s += SpectralState(1, 5), DomainError);
  }

  TEST_CASE("analysis inverts synthesis and evaluate matches the grid") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (int dim = 1; dim <= 2; ++dim) {
      const int cutoff = dim == 1 ? 30 : 10;
      SpectralState s(dim, cutoff);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = {normal(rng), normal(rng)};
      const QuadratureRule& rule = cached_gauss_hermite_rule(default_quadrature_order(cutoff));
      const HermiteTransform t(dim, cutoff, rule);
      const GridField g = t.synthesize(s);
      CHECK(max_abs_difference(t.analyze(g), s) <= 1e-11);
      CHECK(max_abs_difference(analyze(synthesize(s, rule), rule, cutoff), s) <= 1e-11);
      const double y2 = dim == 2 ? rule.nodes[2] : 0.0;
      const std::size_t idx = dim == 2 ? 3 * rule.order + 2 : 3;
      CHECK(std::abs(evaluate(s, rule.nodes[3], y2) - g.values[idx]) <= 1e-11);
      // Parseval on the grid
      cplx grid_mass = 0.0;
      GridField sq = g;
      for (auto& v : sq.values) v = std::norm(v);
      grid_mass = integrate_grid(sq, rule);
      CHECK(grid_mass.real() == doctest::Approx(s.mass()).epsilon(1e-11));
    }
  }
}
