#include "strichartz/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "strichartz/errors.hpp"

namespace strichartz {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2, got " + std::to_string(dim));
}

double norm2(int dim, const Point& p) { return dim == 1 ? p[0] * p[0] : p[0] * p[0] + p[1] * p[1]; }

}  // namespace

SpectralState gaussian_datum(int dim, int cutoff) {
  check_dim(dim);
  SpectralState s(dim, cutoff);
  s[0] = std::pow(kPi, -dim / 4.0);
  return s;
}

SpectralState harmonic_propagate(const SpectralState& state, double dtau) {
  SpectralState out = state;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double lambda = state.index_of(i).eigenvalue();
    out[i] *= std::polar(1.0, -0.5 * lambda * dtau);
  }
  return out;
}

SpectralState reflect(const SpectralState& state) {
  SpectralState out = state;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (state.index_of(i).level() % 2 == 1) out[i] = -out[i];
  return out;
}

SpectralState half_period_propagate(const SpectralState& state, double tau) {
  SpectralState out = harmonic_propagate(reflect(state), tau);
  out *= std::polar(1.0, -0.5 * state.dim() * kPi);
  return out;
}

LensPoint lens_point_map(int dim, double tau, const Point& y) {
  check_dim(dim);
  if (!(std::abs(tau) < kPi / 2)) throw DomainError("lens_point_map: |tau| must be < pi/2");
  const double c = std::cos(tau);
  LensPoint p;
  p.t = std::tan(tau);
  p.x = {y[0] / c, dim == 2 ? y[1] / c : 0.0};
  p.factor = std::pow(c, -0.5 * dim) * std::polar(1.0, -0.5 * norm2(dim, y) * p.t);
  return p;
}

LensPreimage inverse_lens_point_map(int dim, double t, const Point& x) {
  check_dim(dim);
  LensPreimage p;
  p.tau = std::atan(t);
  const double c = std::cos(p.tau);
  p.y = {x[0] * c, dim == 2 ? x[1] * c : 0.0};
  p.factor = std::pow(c, 0.5 * dim) * std::polar(1.0, 0.5 * norm2(dim, p.y) * t);
  return p;
}

cplx physical_gaussian(int dim, double t, const Point& x) {
  check_dim(dim);
  const cplx z{1.0, t};
  return std::pow(kPi, -dim / 4.0) * std::pow(z, -0.5 * dim) * std::exp(-norm2(dim, x) / (2.0 * z));
}

cplx lens_gaussian(int dim, double tau, const Point& y) {
  check_dim(dim);
  return std::pow(kPi, -dim / 4.0) * std::polar(std::exp(-0.5 * norm2(dim, y)), -0.5 * dim * tau);
}

SpectralState duhamel_remainder_closed_1d(double tau, int cutoff) {
  if (std::abs(tau) > kPi / 2) throw DomainError("duhamel_remainder: |tau| must be <= pi/2");
  SpectralState r(1, cutoff);
  const cplx prefactor = kI * std::pow(kPi, -1.25) * std::polar(1.0, -0.5 * tau);
  r[0] = prefactor * tau * alpha_coefficient(0);
  for (int k = 2; k < cutoff; k += 2) {
    const double alpha = alpha_coefficient(k / 2);
    r[k] = prefactor * (-kI) * (alpha / k) * (1.0 - std::polar(1.0, -k * tau));
  }
  return r;
}

DuhamelRemainder::DuhamelRemainder(int dim, int cutoff, DuhamelOptions options)
    : dim_(dim), cutoff_(cutoff), options_(options) {
  check_dim(dim);
  if (cutoff < 4) throw DomainError("duhamel_remainder: cutoff must be >= 4");
  const double exponent = 0.5 + 2.0 / dim;
  const QuadratureRule rule = gauss_hermite_rule(default_quadrature_order(cutoff));
  const GridField source = sample_grid(dim, rule, [&](double y1, double y2) {
    return cplx(std::exp(-exponent * (y1 * y1 + (dim == 2 ? y2 * y2 : 0.0))));
  });
  const HermiteTransform transform(dim, cutoff, rule);
  profile_ = transform.analyze(source);
  const GridField back = transform.synthesize(profile_);
  for (std::size_t i = 0; i < back.values.size(); ++i)
    representation_error_ = std::max(representation_error_, std::abs(back.values[i] - source.values[i]));
  if (representation_error_ > options_.representation_tolerance)
    throw NumericalError("duhamel_remainder: cutoff " + std::to_string(cutoff) +
                         " cannot represent the source profile (max grid error " +
                         std::to_string(representation_error_) + ")");
  amplitude_ = std::pow(kPi, -1.0 - dim / 4.0);
  const NodesWeights gl = gauss_legendre_rule(options_.nodes_per_panel);
  gl_nodes_ = gl.nodes;
  gl_weights_ = gl.weights;
}

cplx DuhamelRemainder::time_integral(int level, double tau) const {
  // \int_0^tau e^{-i(tau-s) lambda/2} e^{-iN s/2} ds
  const double lambda = 2.0 * level + dim_;
  const double width = tau / options_.panels;
  cplx sum{};
  for (int p = 0; p < options_.panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < gl_nodes_.size(); ++i) {
      const double s = mid + 0.5 * width * gl_nodes_[i];
      sum += gl_weights_[i] * std::polar(1.0, -0.5 * (tau - s) * lambda - 0.5 * dim_ * s);
    }
  }
  return 0.5 * width * sum;
}

std::vector<cplx> DuhamelRemainder::level_integrals(double tau) const {
  if (std::abs(tau) > kPi / 2 + 1e-15) throw DomainError("duhamel_remainder: |tau| must be <= pi/2");
  const int max_level = dim_ * (cutoff_ - 1);
  std::vector<cplx> integrals(max_level + 1);
  for (int l = 0; l <= max_level; ++l) integrals[l] = time_integral(l, tau);
  return integrals;
}

SpectralState DuhamelRemainder::assemble(const std::vector<cplx>& integrals) const {
  if (integrals.size() != static_cast<std::size_t>(dim_ * (cutoff_ - 1) + 1))
    throw DomainError("duhamel_remainder: wrong number of level integrals");
  SpectralState r(dim_, cutoff_);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = kI * amplitude_ * profile_[i] * integrals[profile_.index_of(i).level()];
  return r;
}

SpectralState DuhamelRemainder::at(double tau) const { return assemble(level_integrals(tau)); }

SpectralState duhamel_remainder(int dim, double tau, int cutoff, DuhamelOptions options) {
  return DuhamelRemainder(dim, cutoff, options).at(tau);
}

}  // namespace strichartz
