#include "strichartz/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/quadform.hpp"
#include "strichartz/quadrature.hpp"

namespace strichartz {
namespace {

constexpr double kPi = std::numbers::pi;

// Simpson on [0, t_max] for an even integrand, plus an analytic tail, doubled
// to cover the whole line.
IntegralResult even_line_integral(const std::function<double(double)>& f, double t_max, double tolerance,
                                  double tail_value, double tail_error, const char* what) {
  if (!(t_max > 1.0)) throw DomainError(std::string(what) + ": t_max must exceed 1");
  if (2.0 * tail_error > tolerance) {
    const double needed = t_max * std::pow(2.0 * tail_error / (0.5 * tolerance), 0.2);
    throw NumericalError(std::string(what) + ": tail expansion too coarse for tolerance; use t_max >= " +
                         std::to_string(needed));
  }
  const SimpsonResult s = doubling_simpson(f, 0.0, t_max, 0.25 * tolerance);
  return {2.0 * (s.value + tail_value), 2.0 * tail_value, 2.0 * tail_error, s.intervals};
}

}  // namespace

double strichartz_constant(int dim) {
  if (dim == 1) return 1.0 / std::sqrt(3.0);
  if (dim == 2) return 0.5;
  throw DomainError("strichartz_constant: dim must be 1 or 2");
}

double strichartz_constant_quadrature(int dim) {
  return linear_spacetime_norm(gaussian_datum(dim, 4));
}

double d1_term_ratio(int k) {
  if (k < 1) throw DomainError("d1_term_ratio: k must be >= 1");
  // t_{k+1} / t_k = (2k+1)(2k+2) k / (9 (k+1)^3)
  return (2.0 * k + 1) * (2.0 * k + 2) * k / (9.0 * (k + 1.0) * (k + 1.0) * (k + 1.0));
}

double d1_series(int terms) {
  if (terms < 1) throw DomainError("d1_series: terms must be >= 1");
  double sum = 0.0;
  for (int k = terms; k >= 1; --k)
    sum += std::exp(log_factorial(2 * k) - 2.0 * log_factorial(k) - k * std::log(9.0)) / k;
  return sum / kPi;
}

double d1_spectral(int terms) {
  if (terms < 1) throw DomainError("d1_spectral: terms must be >= 1");
  double sum = 0.0;
  for (int j = terms; j >= 1; --j) {
    const double a = alpha_coefficient(j);
    sum += a * a / (2.0 * j);
  }
  return 6.0 * sum / kPi;
}

double d2_closed() { return std::log(4.0 / 3.0) / (2.0 * kPi); }

double d2_integrand(double t) {
  const double t2 = t * t;
  return -(std::log1p(t2) + 2.0 * std::log(3.0) - std::log(9.0 + 25.0 * t2)) / (16.0 * kPi * kPi * (1.0 + t2));
}

IntegralResult d2_integral(double t_max, double tolerance) {
  // g(t) ~ K [c2 / t^2 + c4 / t^4 + O(t^-6)]
  const double k = -1.0 / (16.0 * kPi * kPi);
  const double c2 = 2.0 * std::log(3.0 / 5.0);
  const double c4 = 16.0 / 25.0 - c2;
  const double tail = k * (c2 / t_max + c4 / (3.0 * std::pow(t_max, 3)));
  const double tail_error = std::abs(k) * 4.0 / (5.0 * std::pow(t_max, 5));
  IntegralResult r = even_line_integral(d2_integrand, t_max, tolerance / 4.0, tail, tail_error, "d2_integral");
  r.value *= 4.0;
  r.tail *= 4.0;
  r.tail_error *= 4.0;
  return r;
}

IntegralResult log_integral_unit(double t_max, double tolerance) {
  const double lt = std::log(t_max);
  const double tail = 2.0 * (lt + 1.0) / t_max + (1.0 / 9.0 - 2.0 * lt / 3.0) / std::pow(t_max, 3);
  const double tail_error = 4.0 * (1.0 + lt) / std::pow(t_max, 5);
  return even_line_integral([](double t) { return std::log1p(t * t) / (1.0 + t * t); }, t_max, tolerance, tail,
                            tail_error, "log_integral_unit");
}

IntegralResult log_integral_scaled(double t_max, double tolerance) {
  const double lt = std::log(t_max);
  const double l25 = std::log(25.0);
  const double t3 = std::pow(t_max, 3);
  const double tail = l25 / t_max + 2.0 * (lt + 1.0) / t_max + (9.0 / 25.0 - l25) / (3.0 * t3) -
                      2.0 * (lt / (3.0 * t3) + 1.0 / (9.0 * t3));
  const double tail_error = 4.0 * (l25 + lt) / std::pow(t_max, 5);
  return even_line_integral([](double t) { return std::log(9.0 + 25.0 * t * t) / (1.0 + t * t); }, t_max, tolerance,
                            tail, tail_error, "log_integral_scaled");
}

DuhamelPairing d_n_duhamel(int dim, int cutoff, int tau_panels) {
  if (dim != 1 && dim != 2) throw DomainError("d_n_duhamel: dim must be 1 or 2");
  if (cutoff < 32) throw DomainError("d_n_duhamel: cutoff must be >= 32");
  if (tau_panels < 32) throw DomainError("d_n_duhamel: tau_panels must be >= 32");
  const DuhamelRemainder remainder(dim, cutoff);
  const QuadratureRule& rule = cached_gauss_hermite_rule(default_quadrature_order(cutoff));
  const HermiteTransform transform(dim, cutoff, rule);
  const NodesWeights taus = composite_gauss_legendre(-kPi / 2, kPi / 2, tau_panels, 8);
  const double power = 4.0 / dim;
  const double p = 2.0 + power;

  // |G~|^{4/N} conj(G~) = pi^{-1-N/4} e^{iN tau/2} e^{-(1/2+2/N)|y|^2}
  const GridField profile = sample_grid(dim, rule, [&](double y1, double y2) {
    const double r2 = y1 * y1 + (dim == 2 ? y2 * y2 : 0.0);
    return cplx(std::pow(kPi, -1.0 - dim / 4.0) * std::exp(-(0.5 + 2.0 / dim) * r2));
  });

  double re_sum = 0.0;
  double im_sum = 0.0;
  const cplx minus_i{0.0, -1.0};
  for (std::size_t t = 0; t < taus.nodes.size(); ++t) {
    const double tau = taus.nodes[t];
    GridField r = transform.synthesize(remainder.at(tau));
    const cplx phase = std::polar(1.0, 0.5 * dim * tau);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] *= phase * profile.values[i];
    const cplx pairing = integrate_grid(r, rule);
    re_sum += taus.weights[t] * pairing.real();
    im_sum += taus.weights[t] * (minus_i * pairing).imag();
  }
  return {p * re_sum, -p * im_sum, remainder.representation_error()};
}

}  // namespace strichartz
