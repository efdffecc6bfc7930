// Gaussian quadrature rules and a few one-dimensional integration helpers.
#pragma once

#include <functional>
#include <vector>

namespace strichartz {

// Gauss-Hermite rule. `weights` integrate against e^{-y^2}; `scaled_weights`
// equal weights * e^{y^2} and integrate a decaying integrand directly:
// sum_i scaled_weights[i] * F(y_i) ~ \int F(y) dy.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
};

QuadratureRule gauss_hermite_rule(int order);
// Process-wide memoized rule (thread safe); the reference stays valid.
const QuadratureRule& cached_gauss_hermite_rule(int order);

// Rule for integrands of the form e^{-s y^2} * polynomial, with no weight
// factor: the result is exact for polynomial degree <= 2*order-1.
QuadratureRule gaussian_scaled_rule(int order, double s);

// Default Gauss-Hermite order for states with `cutoff` modes per dimension.
int default_quadrature_order(int cutoff);

struct NodesWeights {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1].
NodesWeights gauss_legendre_rule(int order);
// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
NodesWeights composite_gauss_legendre(double a, double b, int panels, int order);

// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the given
// diagonal and off-diagonal (size n-1) by implicit QL. Throws NumericalError
// when an eigenvalue fails to converge.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> offdiag);

struct SimpsonResult {
  double value = 0.0;
  int intervals = 0;
  double last_change = 0.0;
};

// Composite Simpson on [a, b], doubling the interval count until two
// successive estimates differ by less than tolerance/2.
SimpsonResult doubling_simpson(const std::function<double(double)>& f, double a, double b, double tolerance,
                               int max_doublings = 24);

}  // namespace strichartz
