#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "strichartz/errors.hpp"
#include "strichartz/quadrature.hpp"

using namespace strichartz;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Hermite rule matches a dense Golub-Welsch eigensolve") {
    for (int n : {1, 2, 5, 16, 40, 80}) {
      CAPTURE(n);
      Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
      for (int i = 1; i < n; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(i / 2.0);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
      const QuadratureRule rule = gauss_hermite_rule(n);
      REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        CHECK(rule.nodes[i] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12).scale(1.0));
        CHECK(rule.weights[i] == doctest::Approx(std::sqrt(std::numbers::pi) * v0 * v0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("Gauss-Hermite exactness and scaled weights") {
    const QuadratureRule rule = gauss_hermite_rule(20);
    // \int y^{2k} e^{-y^2} = Gamma(k + 1/2)
    for (int kpow = 0; kpow < 20; ++kpow) {
      double s = 0.0;
      for (int i = 0; i < rule.order; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2 * kpow);
      CHECK(s == doctest::Approx(std::tgamma(kpow + 0.5)).epsilon(1e-12));
    }
    for (int i = 0; i < rule.order; ++i)
      CHECK(rule.scaled_weights[i] == doctest::Approx(rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i])));
    CHECK(&cached_gauss_hermite_rule(20) == &cached_gauss_hermite_rule(20));
  }

  TEST_CASE("scaled rule integrates e^{-s y^2} polynomials") {
    for (double s : {0.5, 1.0, 3.0, 5.0 / 3.0}) {
      const QuadratureRule rule = gaussian_scaled_rule(12, s);
      double m0 = 0.0, m2 = 0.0;
      for (int i = 0; i < rule.order; ++i) {
        m0 += rule.scaled_weights[i] * std::exp(-s * rule.nodes[i] * rule.nodes[i]);
        m2 += rule.scaled_weights[i] * std::exp(-s * rule.nodes[i] * rule.nodes[i]) * rule.nodes[i] * rule.nodes[i];
      }
      CHECK(m0 == doctest::Approx(std::sqrt(std::numbers::pi / s)).epsilon(1e-13));
      CHECK(m2 == doctest::Approx(std::sqrt(std::numbers::pi / s) / (2 * s)).epsilon(1e-13));
    }
  }

  TEST_CASE("Gauss-Legendre rules") {
    const NodesWeights gl = gauss_legendre_rule(8);
    double sum = 0.0, x14 = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      sum += gl.weights[i];
      x14 += gl.weights[i] * std::pow(gl.nodes[i], 14);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
    const NodesWeights c = composite_gauss_legendre(0.0, std::numbers::pi, 16, 8);
    double s = 0.0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) s += c.weights[i] * std::sin(c.nodes[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("tridiagonal eigenvalues") {
    // second-difference matrix: 2 - 2 cos(k pi / (n + 1))
    const int n = 12;
    const std::vector<double> ev = tridiagonal_eigenvalues(std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0));
    for (int k = 1; k <= n; ++k)
      CHECK(ev[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1))).epsilon(1e-13));
  }

  TEST_CASE("doubling Simpson") {
    const SimpsonResult r = doubling_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  }

  TEST_CASE("invalid orders are rejected") {
    CHECK_THROWS_AS(gauss_hermite_rule(0), DomainError);
    CHECK_THROWS_AS(gaussian_scaled_rule(4, -1.0), DomainError);
  }
}
