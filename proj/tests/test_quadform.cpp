#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/quadform.hpp"
#include "strichartz/quadrature.hpp"

using namespace strichartz;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
}  // namespace

TEST_SUITE("quadform") {
  TEST_CASE("time-phase integral") {
    CHECK(time_phase_integral(0) == doctest::Approx(kPi));
    CHECK(time_phase_integral(2) == doctest::Approx(0.0).scale(1.0));
    CHECK(time_phase_integral(1) == doctest::Approx(2.0));
    CHECK(time_phase_integral(-3) == doctest::Approx(-2.0 / 3.0));
    const NodesWeights gl = composite_gauss_legendre(-kPi / 2, kPi / 2, 8, 8);
    for (int m = -7; m <= 7; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::cos(m * gl.nodes[i]);
      CHECK(time_phase_integral(m) == doctest::Approx(s).scale(1.0).epsilon(1e-13));
    }
  }

  TEST_CASE("overlap table agrees with the single-entry quadrature") {
    const OverlapTable t(1.0, 12);
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 12; ++k)
        CHECK(t(j, k) == doctest::Approx(overlap_integral(1.0, EigenIndex::of(j), EigenIndex::of(k))).scale(1.0).epsilon(1e-13));
  }

  TEST_CASE("Q on basis functions") {
    CHECK(q_eval(SpectralState::unit(EigenIndex::of(3), 12)) == doctest::Approx(2 * kSqrtPi / (3 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(q_eval(SpectralState::unit(EigenIndex::of(4), 12)) == doctest::Approx(8 * kSqrtPi / (9 * std::sqrt(3.0))).epsilon(1e-12));
    for (int j = 1; j < 20; ++j)
      CHECK(q_eval(SpectralState::unit(EigenIndex::of(j), 24)) == doctest::Approx(q_diag_1d(j)).scale(1.0).epsilon(1e-10));
    CHECK(q_diag_2d(1, 1) == doctest::Approx(kPi / 2));
    CHECK(q_diag_2d(1, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(q_eval(SpectralState::unit(EigenIndex::of(1, 1), 6)) == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(q_eval(SpectralState::unit(EigenIndex::of(2, 1), 6)) == doctest::Approx(q_diag_2d(2, 1)).epsilon(1e-12));
  }

  TEST_CASE("Q is a real quadratic form: homogeneity and the parallelogram law") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal;
    for (int dim = 1; dim <= 2; ++dim) {
      const int cutoff = dim == 1 ? 10 : 5;
      SpectralState a(dim, cutoff), b(dim, cutoff);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = {normal(rng), normal(rng)};
        b[i] = {normal(rng), normal(rng)};
      }
      const double qa = q_eval(a), qb = q_eval(b);
      CHECK(q_eval(2.5 * a) == doctest::Approx(6.25 * qa).epsilon(1e-11));
      CHECK(q_eval(a + b) + q_eval(a - b) == doctest::Approx(2 * qa + 2 * qb).epsilon(1e-10));
      const QuadFormMatrix m = gram_matrix(dim, cutoff);
      CHECK(m.value(to_real_vector(a)) == doctest::Approx(qa).epsilon(1e-10));
      CHECK(max_abs_difference(from_real_vector(dim, cutoff, to_real_vector(a)), a) == 0.0);
    }
  }

  TEST_CASE("symmetry directions are in the kernel") {
    for (int dim = 1; dim <= 2; ++dim) {
      const auto dirs = kernel_directions(dim, 12);
      CHECK(dirs.size() == (dim == 1 ? 6u : 8u));
      for (const auto& d : dirs) {
        CAPTURE(d.name);
        CHECK(d.state.mass() == doctest::Approx(1.0));
        CHECK(std::abs(q_eval(d.state)) <= 1e-12);
      }
    }
  }

  TEST_CASE("2D level-2 closed form") {
    const cplx a{1.0, 0.5}, b{-0.3, 2.0}, c{0.7, -0.1};
    SpectralState s(2, 4);
    s.at(EigenIndex::of(0, 2)) = a;
    s.at(EigenIndex::of(2, 0)) = b;
    s.at(EigenIndex::of(1, 1)) = c;
    CHECK(q_eval(s) == doctest::Approx(q_level2_2d(a, b, c)).epsilon(1e-12));
    CHECK(q_level2_2d(a, a, 0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(q_level2_2d(a, b, c) ==
          doctest::Approx(kPi * (0.25 * std::norm(a - b) + 0.5 * std::norm(c))).epsilon(1e-13));
  }

  TEST_CASE("F and F_script") {
    for (int m = 1; m <= 9; ++m)
      for (int j = 0; j <= m; ++j)
        for (int k = 0; k <= m; ++k) {
          CHECK(f_func(m, j, k) == doctest::Approx(f_func(m, k, j)).epsilon(1e-14));
          CHECK(f_func(m, j, k) == doctest::Approx(f_func(m, m - j, m - k)).epsilon(1e-14));
          CHECK(f_func(m, j, k) == doctest::Approx(g_func(j, k) * g_func(m - j, m - k)).epsilon(1e-14));
        }
    CHECK(g_func(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(g_func(1, 2) == 0.0);
    // independent high-precision values of the sum over k
    CHECK(f_script(3, 0) == doctest::Approx(0.841506350946110).epsilon(1e-13));
    CHECK(f_script(4, 2) == doctest::Approx(0.663982772309872).epsilon(1e-13));
    CHECK(f_script(6, 5) == doctest::Approx(0.454455386817820).epsilon(1e-12));
    CHECK(f_script(4, 1) == doctest::Approx(0.5).epsilon(1e-14));
    for (int m = 7; m <= 40; ++m)
      for (int j = 0; j <= m; ++j) CHECK(f_script(m, j) < 1.0);
  }

  TEST_CASE("tail bounds") {
    CHECK_FALSE(tail_bound(1, 4).certifies);
    CHECK(tail_bound(1, 5).certifies);
    CHECK(tail_bound(1, 5).value > 0.0);
    CHECK(tail_bound(1, 3).value < 0.0);
    CHECK(tail_bound(2, 7).certifies);
    CHECK_FALSE(tail_bound(2, 6).certifies);
    CHECK(tail_index(1) == 5);
    CHECK(tail_index(2) == 7);
    for (int j = 5; j <= 60; ++j) CHECK(q_diag_1d(j) >= tail_bound(1, j).value - 1e-12);
  }

  TEST_CASE("coercivity certificates") {
    const CoercivityReport c1 = coercivity_certificate(1, 32);
    CHECK(c1.valid);
    CHECK(c1.c_min == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-9));
    CHECK(c1.minimizer == "h_3");
    CHECK(c1.kernel_residuals.size() == 6u);
    CHECK(c1.cross_level_max <= 1e-12);
    const CoercivityReport c2 = coercivity_certificate(2, 12);
    CHECK(c2.valid);
    CHECK(c2.c_min > 0.0);
    CHECK(c2.psd_min_eigenvalue >= -1e-10);
    CHECK_THROWS_AS(coercivity_certificate(3, 16), DomainError);
    CHECK_THROWS_AS(coercivity_certificate(1, 4), DomainError);
  }

  TEST_CASE("Strichartz deficit expands to second order with coefficient Q") {
    SpectralState phi = SpectralState::unit(EigenIndex::of(3), 8);
    phi *= 1.0 / std::sqrt(phi.mass());
    const double q = q_eval(phi);
    const double e1 = std::abs(strichartz_deficit(phi, 1e-2) - 1e-4 * q);
    const double e2 = std::abs(strichartz_deficit(phi, 5e-3) - 2.5e-5 * q);
    CHECK(std::log(e1 / e2) / std::log(2.0) >= 2.9);
    CHECK(linear_spacetime_norm(gaussian_datum(1, 4)) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  }
}
