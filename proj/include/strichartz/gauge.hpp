// Fixing the symmetry gauge of a datum: the moment residual map built from
// the equation's phase, scaling, Galilean, translation and time-shift
// symmetries, its Jacobian at the Gaussian, and a damped Newton solve that
// places a datum into the orthogonality slice of the coercivity estimate.
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strichartz/gaussian.hpp"

namespace strichartz {

struct SymmetryParams {
  int dim = 1;
  double theta = 0.0;
  double rho = 1.0;
  Point xi{};
  Point x0{};
  double t0 = 0.0;

  static SymmetryParams identity(int dim);
  // [theta, rho, xi..., x0..., t0], length 3 + 2N
  std::vector<double> pack() const;
  static SymmetryParams unpack(int dim, const std::vector<double>& v);
  static std::vector<std::string> names(int dim);
};

struct OrthoDecomposition {
  double alpha = 0.0;  // Re \int f G_0
  SpectralState phi;   // f - alpha G_0
};

OrthoDecomposition decompose_datum(const SpectralState& f);

// |\int phi G_0|, |\int phi |x|^2 G_0|, |\int phi x_j G_0| (complex pairings).
std::vector<double> ortho_residuals(const SpectralState& phi);

struct GaugeOptions {
  double gamma = 1.0;
  int steps = 32;               // Strang steps from tau = 0 to atan(t0)
  int quadrature_order = 0;     // 0 selects 2 * cutoff + 8
  double leakage_tolerance = 1e-6;
  double fd_step = 1e-4;
  int max_iterations = 30;
  int max_halvings = 8;
  int threads = 0;              // Jacobian columns in flight; 0 selects the hardware concurrency
};

// Residual map for a fixed mass parameter delta and datum f:
//   U = delta G_0 - e^{i theta} rho^{N/2} e^{i x.xi} u(t0, rho x + x0),
// where u solves the NLS with data delta f, and the residual is
//   [Im<U,G0>, Re<U,q>, Im<U,x_j G0>..., Re<U,x_j G0>..., Im<U,q>] / delta
// with q = (|x|^2 - N/2) G_0 and <U,w> = \int U w.
class GaugeProblem {
 public:
  GaugeProblem(double delta, SpectralState f, GaugeOptions options = {});

  int dim() const { return f_.dim(); }
  int cutoff() const { return f_.cutoff(); }
  double delta() const { return delta_; }
  const GaugeOptions& options() const { return options_; }

  // Throws NumericalError when the transformed datum leaks more than
  // leakage_tolerance of its mass outside the retained modes.
  std::vector<double> residual(const SymmetryParams& p) const;
  Eigen::MatrixXd jacobian(const SymmetryParams& p) const;

  // e^{i theta} rho^{N/2} e^{i x.xi} u(t0, rho x + x0) / delta in the eigenbasis.
  SpectralState transformed_datum(const SymmetryParams& p) const;
  // Relative mass lost when the transformed datum is re-projected.
  double leakage(const SymmetryParams& p) const;

 private:
  const SpectralState& evolved(double t0) const;
  std::vector<cplx> transformed_grid(const SymmetryParams& p) const;

  double delta_;
  SpectralState f_;
  GaugeOptions options_;
  QuadratureRule rule_;
  std::vector<double> weights_;  // tensor scaled weights
  std::vector<double> g0_;       // G_0 on the grid
  std::vector<double> q_;        // (|x|^2 - N/2) G_0 on the grid
  mutable std::mutex cache_mutex_;
  mutable std::map<double, SpectralState> cache_;
};

std::vector<double> phi_residual(double delta, const SymmetryParams& p, const SpectralState& f,
                                 const GaugeOptions& options = {});

// Finite-difference Jacobian at (theta, Gamma) = identity with f = G_0.
Eigen::MatrixXd jacobian_at_reference(double delta, int dim, int cutoff = 32, const GaugeOptions& options = {});
// Closed form of the same Jacobian. With `with_correction` the t0 column
// includes the exact nonlinear term -gamma delta^{4/N} \int G_0^{2+4/N} w;
// without it only the leading-order entries are returned.
Eigen::MatrixXd reference_jacobian(double delta, int dim, double gamma, bool with_correction);

struct GaugeResult {
  SymmetryParams params;
  std::vector<double> residual;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> history;  // residual norm per iteration, starting point first
  SpectralState datum;          // transformed datum divided by delta
  OrthoDecomposition decomposition;
  std::vector<double> ortho;    // ortho_residuals(decomposition.phi)
  double mass_error = 0.0;      // |mass(datum) - mass(f)| / mass(f)
};

// Damped Newton iteration on the residual map, starting from `start`.
// Throws NumericalError on non-convergence (carrying the last residual norm)
// or a singular Jacobian.
GaugeResult newton_gauge_fix(double delta, const SpectralState& f, double tol, const GaugeOptions& options = {},
                             const SymmetryParams* start = nullptr);

// A datum f for which `p` (with t0 = 0) maps delta f exactly onto delta G_0:
// f(z) = e^{-i theta} rho^{-N/2} e^{-i xi.(z-x0)/rho} G_0((z - x0)/rho).
SpectralState plant_symmetry(const SymmetryParams& p, int cutoff);

}  // namespace strichartz
