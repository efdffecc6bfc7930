// The normalized Gaussian, its free evolution, the lens transform between the
// physical and harmonic frames, and the first-order Duhamel correction.
#pragma once

#include <array>
#include <vector>

#include "strichartz/hermite.hpp"

namespace strichartz {

using Point = std::array<double, 2>;

// G_0 = pi^{-N/4} e^{-|x|^2/2} in the eigenbasis (a multiple of h_0 / h_00).
SpectralState gaussian_datum(int dim, int cutoff);

// Exact oscillator propagator e^{-i dtau H / 2}.
SpectralState harmonic_propagate(const SpectralState& state, double dtau);

// phi(y) -> phi(-y)
SpectralState reflect(const SpectralState& state);

// e^{-i(pi+tau)H/2} phi computed as e^{-iN pi/2} e^{-i tau H/2} (reflect phi):
// the lens-frame form of the pseudo-conformal inversion.
SpectralState half_period_propagate(const SpectralState& state, double tau);

struct LensPoint {
  double t = 0.0;
  Point x{};
  cplx factor;  // (L u)(tau, y) = factor * u(t, x)
};

// Throws DomainError unless |tau| < pi/2.
LensPoint lens_point_map(int dim, double tau, const Point& y);

struct LensPreimage {
  double tau = 0.0;
  Point y{};
  cplx factor;  // u(t, x) = factor * (L u)(tau, y)
};

LensPreimage inverse_lens_point_map(int dim, double t, const Point& x);

// G(t, x) = pi^{-N/4} (1+it)^{-N/2} e^{-|x|^2 / (2(1+it))}
cplx physical_gaussian(int dim, double t, const Point& x);
// Lens image pi^{-N/4} e^{-iN tau/2} e^{-|y|^2/2}
cplx lens_gaussian(int dim, double tau, const Point& y);

// Closed-form lens-frame remainder for N = 1.
SpectralState duhamel_remainder_closed_1d(double tau, int cutoff);

struct DuhamelOptions {
  int panels = 64;
  int nodes_per_panel = 4;
  double representation_tolerance = 1e-8;
};

// Lens-frame remainder r(tau) = i \int_0^tau e^{-i(tau-s)H/2} (|G|^{4/N} G)(s) ds
// with the source profile projected onto the eigenbasis once and the time
// integral evaluated by composite Gauss-Legendre panels.
class DuhamelRemainder {
 public:
  DuhamelRemainder(int dim, int cutoff, DuhamelOptions options = {});

  SpectralState at(double tau) const;
  // The time integrals \int_0^tau e^{-i(tau-s) lambda_l/2} e^{-iN s/2} ds per level l,
  // and the state they determine; at(tau) == assemble(level_integrals(tau)).
  std::vector<cplx> level_integrals(double tau) const;
  SpectralState assemble(const std::vector<cplx>& integrals) const;

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  // Spatial profile e^{-(1/2+2/N)|y|^2} in the eigenbasis; the source is
  // amplitude() * e^{-iN s/2} * profile.
  const SpectralState& source_profile() const { return profile_; }
  double amplitude() const { return amplitude_; }
  double representation_error() const { return representation_error_; }

 private:
  cplx time_integral(int level, double tau) const;

  int dim_;
  int cutoff_;
  DuhamelOptions options_;
  SpectralState profile_;
  double amplitude_;
  double representation_error_ = 0.0;
  std::vector<double> gl_nodes_;
  std::vector<double> gl_weights_;
};

SpectralState duhamel_remainder(int dim, double tau, int cutoff, DuhamelOptions options = {});

}  // namespace strichartz
