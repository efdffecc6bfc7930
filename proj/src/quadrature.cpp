#include "strichartz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "strichartz/errors.hpp"
#include "strichartz/hermite.hpp"

namespace strichartz {

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> offdiag) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return d;
  if (static_cast<int>(offdiag.size()) != n - 1) throw DomainError("tridiagonal: off-diagonal must have size n-1");
  std::vector<double> e(offdiag);
  e.push_back(0.0);
  constexpr int max_iter = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > max_iter)
        throw NumericalError("tridiagonal eigensolver did not converge for eigenvalue " + std::to_string(l) +
                             " of " + std::to_string(n));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

namespace {

// Largest y^2 for which e^{y^2} is representable; nodes beyond it carry a
// zero scaled weight (any decaying integrand is below underflow there).
constexpr double kMaxExponent = 700.0;

// Newton refinement of a root of h_n using the three-term recurrence.
double polish_hermite_root(int n, double y) {
  for (int it = 0; it < 6; ++it) {
    double pm1 = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
      const double next = (k == 0) ? std::sqrt(2.0) * y * p
                                   : std::sqrt(2.0 / (k + 1)) * y * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
      pm1 = p;
      p = next;
    }
    // p and pm1 are the polynomial parts P_n, P_{n-1}; P_n' = sqrt(2n) P_{n-1}
    const double dp = std::sqrt(2.0 * n) * pm1;
    if (dp == 0.0) break;
    const double step = p / dp;
    y -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(y))) break;
  }
  return y;
}

double polish_legendre_root(int n, double x, double* derivative) {
  double dp = 0.0;
  for (int it = 0; it < 8; ++it) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? x : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double step = pn / dp;
    x -= step;
    if (std::abs(step) < 1e-16) break;
  }
  *derivative = dp;
  return x;
}

}  // namespace

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw DomainError("gauss_hermite_rule: order must be >= 1");
  std::vector<double> diag(order, 0.0), off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(k / 2.0);
  std::vector<double> nodes = tridiagonal_eigenvalues(diag, off);
  for (double& y : nodes) y = polish_hermite_root(order, y);
  for (int i = 0; i < order / 2; ++i) {
    const double a = 0.5 * (nodes[order - 1 - i] - nodes[i]);
    nodes[i] = -a;
    nodes[order - 1 - i] = a;
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;

  QuadratureRule rule;
  rule.order = order;
  rule.nodes = nodes;
  rule.weights.resize(order);
  rule.scaled_weights.resize(order);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  std::vector<double> h(order);
  for (int i = 0; i < order; ++i) {
    const double y = nodes[i];
    // Christoffel function: w_i e^{y_i^2} = sqrt(pi) / sum_k h_k(y_i)^2, evaluated with scale tracking
    double log_scale = 0.0;
    const double sum = hermite_square_sum(order, y, &log_scale);
    const double log_scaled = std::log(sqrt_pi) - std::log(sum) - log_scale;
    rule.weights[i] = std::exp(log_scaled - y * y);
    rule.scaled_weights[i] = (log_scaled < kMaxExponent) ? std::exp(log_scaled) : 0.0;
  }
  return rule;
}

const QuadratureRule& cached_gauss_hermite_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_hermite_rule(order));
  return *slot;
}

QuadratureRule gaussian_scaled_rule(int order, double s) {
  if (!(s > 0.0)) throw DomainError("gaussian_scaled_rule: exponent must be positive");
  QuadratureRule base = cached_gauss_hermite_rule(order);
  const double root = std::sqrt(s);
  for (int i = 0; i < order; ++i) {
    base.nodes[i] /= root;
    base.scaled_weights[i] /= root;
    base.weights[i] = base.scaled_weights[i] * std::exp(-base.nodes[i] * base.nodes[i]);
  }
  return base;
}

int default_quadrature_order(int cutoff) { return 2 * cutoff + 8; }

NodesWeights gauss_legendre_rule(int order) {
  if (order < 1) throw DomainError("gauss_legendre_rule: order must be >= 1");
  std::vector<double> diag(order, 0.0), off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  NodesWeights out;
  out.nodes = tridiagonal_eigenvalues(diag, off);
  out.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double dp = 0.0;
    out.nodes[i] = polish_legendre_root(order, out.nodes[i], &dp);
    const double x = out.nodes[i];
    out.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int i = 0; i < order / 2; ++i) {
    const double a = 0.5 * (out.nodes[order - 1 - i] - out.nodes[i]);
    const double w = 0.5 * (out.weights[i] + out.weights[order - 1 - i]);
    out.nodes[i] = -a;
    out.nodes[order - 1 - i] = a;
    out.weights[i] = out.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) out.nodes[order / 2] = 0.0;
  return out;
}

NodesWeights composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: panels must be >= 1");
  const NodesWeights base = gauss_legendre_rule(order);
  NodesWeights out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * order);
  out.weights.reserve(out.nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      out.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return out;
}

SimpsonResult doubling_simpson(const std::function<double(double)>& f, double a, double b, double tolerance,
                               int max_doublings) {
  int n = 16;
  const double fa = f(a), fb = f(b);
  // running sums of interior values at odd and even positions
  double even_sum = 0.0, odd_sum = 0.0;
  double h = (b - a) / n;
  for (int i = 1; i < n; ++i) (i % 2 ? odd_sum : even_sum) += f(a + i * h);
  double estimate = h / 3.0 * (fa + fb + 4.0 * odd_sum + 2.0 * even_sum);
  for (int d = 0; d < max_doublings; ++d) {
    even_sum += odd_sum;
    odd_sum = 0.0;
    n *= 2;
    h = (b - a) / n;
    for (int i = 1; i < n; i += 2) odd_sum += f(a + i * h);
    const double next = h / 3.0 * (fa + fb + 4.0 * odd_sum + 2.0 * even_sum);
    const double change = std::abs(next - estimate);
    estimate = next;
    if (change < 0.5 * tolerance) return {estimate, n, change};
  }
  throw NumericalError("doubling Simpson did not reach tolerance " + std::to_string(tolerance) + " with " +
                       std::to_string(n) + " intervals");
}

}  // namespace strichartz
