#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strichartz/constants.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/harmonic_sim.hpp"

using namespace strichartz;

namespace {
constexpr double kPi = std::numbers::pi;

SimConfig small(int dim, double delta, int steps = 64) {
  SimConfig c = SimConfig::defaults(dim);
  c.cutoff = dim == 1 ? 32 : 16;
  c.steps = steps;
  c.delta = delta;
  return c;
}
}  // namespace

TEST_SUITE("harmonic_sim") {
  TEST_CASE("configuration checks") {
    CHECK(SimConfig::defaults(1).cutoff == 96);
    CHECK(SimConfig::defaults(2).cutoff == 48);
    CHECK(SimConfig::defaults(2).steps == 4096);
    CHECK(dealiased_order(1, 96) == 288);
    CHECK(dealiased_order(2, 48) == 104);
    SimConfig c = small(1, 0.1);
    c.steps = 63;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small(1, 0.1);
    c.gamma = 0.5;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small(1, 1.5);
    CHECK_THROWS_AS(validate(c), DomainError);
    c = small(1, 0.1);
    c.cutoff = 8;
    CHECK_THROWS_AS(validate(c), DomainError);
  }

  TEST_CASE("linear runs reproduce the exact propagator") {
    for (int dim = 1; dim <= 2; ++dim) {
      SimConfig c = small(dim, 0.3, 32);
      c.nonlinear = false;
      c.store_states = true;
      const Trajectory t = evolve(c);
      const SpectralState g = gaussian_datum(dim, c.cutoff);
      for (std::size_t i = 0; i < t.taus.size(); ++i) {
        SpectralState expect = g;
        expect *= 0.3 * std::polar(1.0, -0.5 * dim * t.taus[i]);
        CHECK(max_abs_difference(t.states[i], expect) <= 1e-12);
      }
      // |v|^p is constant in tau, so the norm is exact: C_S delta^p
      const double p = 2.0 + 4.0 / dim;
      c.delta = 1.0;
      CHECK(spacetime_norm(evolve(c)) == doctest::Approx(strichartz_constant(dim)).epsilon(1e-8));
      c.delta = 0.3;
      CHECK(spacetime_norm(evolve(c)) == doctest::Approx(std::pow(0.3, p) * strichartz_constant(dim)).epsilon(1e-10));
    }
  }

  TEST_CASE("zero data stays zero") {
    const Trajectory t = evolve(small(1, 0.0));
    CHECK(spacetime_norm(t) == 0.0);
    for (double m : t.masses) CHECK(m == 0.0);
  }

  TEST_CASE("mass is conserved by the splitting") {
    SimConfig c = SimConfig::defaults(1);
    c.steps = 512;
    const Trajectory t = evolve(c);
    CHECK(t.masses.back() == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(std::abs(t.masses.back() - 0.01) <= 1e-11);
    CHECK(t.mass_drift <= 1e-9);
    const Trajectory t2 = evolve(small(2, 0.25, 128));
    CHECK(t2.mass_drift <= 1e-9);
  }

  TEST_CASE("even data keeps odd coefficients zero; time reversal is conjugation") {
    for (int dim = 1; dim <= 2; ++dim) {
      SimConfig c = small(dim, 0.25, 128);
      c.store_states = true;
      double odd = 0.0;
      const Trajectory t = evolve(c, std::nullopt, [&](std::size_t, double, const SpectralState& v, const std::vector<cplx>&) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          const EigenIndex idx = v.index_of(i);
          if (idx.j % 2 || idx.k % 2) odd = std::max(odd, std::abs(v[i]));
        }
      });
      CHECK(odd <= 1e-12);
      const int mid = c.steps / 2;
      double rev = 0.0;
      for (int i = 1; i <= mid; ++i) {
        const SpectralState& a = t.states[mid + i];
        const SpectralState& b = t.states[mid - i];
        for (std::size_t n = 0; n < a.size(); ++n) rev = std::max(rev, std::abs(a[n] - std::conj(b[n])));
      }
      CHECK(rev <= 1e-8);
    }
  }

  TEST_CASE("Strang steps are reversible") {
    const SimConfig c = small(1, 0.3);
    SpectralState v0 = gaussian_datum(1, c.cutoff);
    v0 *= 0.3;
    v0 += 0.05 * SpectralState::unit(EigenIndex::of(2), c.cutoff);
    const SpectralState there = evolve_to(c, v0, 0.8, 40);
    const SpectralState back = evolve_to(c, there, -0.8, 40);
    CHECK(max_abs_difference(back, v0) <= 1e-12);
  }

  TEST_CASE("second-order splitting and spectral convergence") {
    SimConfig c = small(1, 0.2, 64);
    const SplittingConvergence s = splitting_convergence(c, 3);
    REQUIRE(s.ratios.size() == 2u);
    for (double r : s.ratios) CHECK(std::abs(r - 4.0) <= 0.5);

    SimConfig coarse = SimConfig::defaults(1);
    coarse.delta = 0.2;
    coarse.steps = 256;
    coarse.cutoff = 48;
    SimConfig fine = coarse;
    fine.cutoff = 96;
    CHECK(std::abs(spacetime_norm(evolve(coarse)) - spacetime_norm(evolve(fine))) < 1e-9);
  }

  TEST_CASE("expansion argument checks") {
    const SimConfig c = small(1, 0.1);
    CHECK_THROWS_AS(expansion_experiment(1, 1.0, {0.05, 0.1, 0.2}, c), DomainError);
    CHECK_THROWS_AS(expansion_experiment(1, 1.0, {0.5, 0.1}, c), DomainError);
  }

  TEST_CASE("1D expansion at reduced resolution has the right sign and size") {
    SimConfig c = SimConfig::defaults(1);
    c.cutoff = 64;
    c.steps = 1024;
    const ExpansionReport f = expansion_experiment(1, 1.0, {0.2, 0.1, 0.05}, c);
    CHECK(f.rows.size() == 3u);
    CHECK(f.reference == doctest::Approx(d1_series(400)));
    CHECK(f.relative_error <= 0.02);
    const ExpansionReport d = expansion_experiment(1, -1.0, {0.2, 0.1, 0.05}, c);
    CHECK(d.extrapolated < 0.0);
    CHECK(d.relative_error <= 0.02);
  }

  TEST_CASE("first-order Duhamel approximation error has the expected order in 1D") {
    SimConfig c = SimConfig::defaults(1);
    c.steps = 1024;
    const PerturbationReport p = perturbation_order_check(1, {0.2, 0.1, 0.05}, c);
    CHECK(p.expected_slope == 9.0);
    CHECK(p.slope >= 8.8);
  }

  TEST_CASE("spacetime norm at other exponents needs stored states") {
    SimConfig c = small(1, 0.2, 32);
    CHECK_THROWS_AS(spacetime_norm(evolve(c), 4.0), DomainError);
    c.store_states = true;
    c.nonlinear = false;
    // linear Gaussian, p = 4: pi * pi^{-1} * sqrt(pi/2) * delta^4
    CHECK(spacetime_norm(evolve(c), 4.0) == doctest::Approx(std::sqrt(kPi / 2) * std::pow(0.2, 4)).epsilon(1e-9));
  }
}
