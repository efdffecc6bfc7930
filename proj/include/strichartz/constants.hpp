// Sharp Strichartz constants and the first nonlinear correction constants
// D_1, D_2, each available through independent numerical routes.
#pragma once

namespace strichartz {

// 1/sqrt(3) for N = 1, 1/2 for N = 2.
double strichartz_constant(int dim);
// \iint |G~|^{2+4/N} over (-pi/2, pi/2) x R^N by lens-frame quadrature.
double strichartz_constant_quadrature(int dim);

// (1/pi) sum_{k=1}^{terms} (2k)! / (k 9^k (k!)^2)
double d1_series(int terms);
// Same sum written over the Hermite coefficients of e^{-5y^2/2}.
double d1_spectral(int terms);
// Ratio of consecutive series terms; tends to 4/9.
double d1_term_ratio(int k);

double d2_closed();

struct IntegralResult {
  double value = 0.0;
  double tail = 0.0;          // analytic contribution beyond t_max
  double tail_error = 0.0;    // bound on the neglected part of the tail expansion
  int intervals = 0;
};

// 4 \int_R Re(\int |G|^2 conj(G) r dx) dt from the closed-form inner integral.
// Throws NumericalError, naming a sufficient t_max, when the tail expansion is
// too coarse for the tolerance.
IntegralResult d2_integral(double t_max = 400.0, double tolerance = 1e-10);
// Inner x-integral as a function of t.
double d2_integrand(double t);
// \int_R ln(1+t^2)/(1+t^2) dt  (= 2 pi ln 2)
IntegralResult log_integral_unit(double t_max = 400.0, double tolerance = 1e-10);
// \int_R ln(9+25t^2)/(1+t^2) dt  (= 6 pi ln 2)
IntegralResult log_integral_scaled(double t_max = 400.0, double tolerance = 1e-10);

struct DuhamelPairing {
  double value = 0.0;     // (2+4/N) Re \iint |G~|^{4/N} conj(G~) r~
  double im_form = 0.0;   // -(2+4/N) Im \iint |G~|^{4/N} conj(G~) (-i r~)
  double representation_error = 0.0;
};

// D_N evaluated entirely in the harmonic frame from the Duhamel remainder.
DuhamelPairing d_n_duhamel(int dim, int cutoff, int tau_panels);

}  // namespace strichartz
