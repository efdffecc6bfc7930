// The second variation Q of the Strichartz deficit at the Gaussian, written in
// the harmonic frame, together with its spectral values, Gram matrix and a
// coercivity certificate on the complement of the symmetry directions.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strichartz/hermite.hpp"

namespace strichartz {

// \int_{-pi/2}^{pi/2} e^{i m tau} d tau
double time_phase_integral(int m);

// \int e^{-a |y|^2} h_j h_k dy (tensorized in 2D); exact zero for odd parity.
double overlap_integral(double a, const EigenIndex& j, const EigenIndex& k);

// 1D overlaps \int e^{-a y^2} h_j h_k for all j, k < cutoff.
class OverlapTable {
 public:
  OverlapTable(double a, int cutoff);
  double operator()(int j, int k) const { return table_[static_cast<std::size_t>(j) * cutoff_ + k]; }
  int cutoff() const { return cutoff_; }

 private:
  int cutoff_;
  std::vector<double> table_;
};

// Q(phi), assembled level by level from grid quadrature of the oscillator
// components of phi and the closed-form time integrals.
double q_eval(const SpectralState& phi);

double q_diag_1d(int j);
double q_diag_2d(int j, int k);
// Q(a h_02 + b h_20 + c h_11)
double q_level2_2d(cplx a, cplx b, cplx c);

double g_func(int j, int k);
double f_func(int m, int j, int k);
double f_script(int m, int j);

struct TailBound {
  double value = 0.0;
  // 1D: value is a lower bound on Q(h_j); certifies when positive.
  // 2D: value is an upper bound on F_script(m, .); certifies when below 1.
  bool certifies = false;
};

TailBound tail_bound(int dim, int index);
// Smallest index from which the analytic bound certifies for every larger index.
int tail_index(int dim);

// Real coordinates of a state: [Re c_0 .. Re c_{K-1}, Im c_0 .. Im c_{K-1}].
Eigen::VectorXd to_real_vector(const SpectralState& state);
SpectralState from_real_vector(int dim, int cutoff, const Eigen::VectorXd& v);

// The symmetry directions G_0, x_j G_0, |x|^2 G_0 and their i-multiples,
// each normalized to unit L^2 mass.
struct KernelDirection {
  std::string name;
  SpectralState state;
};
std::vector<KernelDirection> kernel_directions(int dim, int cutoff);

struct QuadFormMatrix {
  int dim = 1;
  int cutoff = 0;
  Eigen::MatrixXd entries;  // Q(v) = v^T entries v in real coordinates
  std::vector<Eigen::VectorXd> kernel_basis;  // orthonormal (Euclidean) symmetry directions
  double self_consistency_error = 0.0;

  double value(const Eigen::VectorXd& v) const { return v.dot(entries * v); }
  // Largest |entry| linking different oscillator levels, h_0 sector excluded.
  double cross_level_max() const;
};

QuadFormMatrix gram_matrix(int dim, int cutoff);

struct CoercivityReport {
  int dim = 1;
  int cutoff = 0;
  double c_min = 0.0;             // in units of ||phi||^2_{L^2}
  std::string minimizer;          // dominant basis direction of the minimizing eigenvector
  std::vector<std::string> kernel_names;
  std::vector<double> kernel_residuals;
  int tail_index = 0;
  double tail_lower_bound = 0.0;  // normalized lower bound on Q beyond the cutoff
  double psd_min_eigenvalue = 0.0;
  double matrix_norm = 0.0;
  double cross_level_max = 0.0;
  double symmetry_error = 0.0;
  int blocks = 0;
  bool valid = false;
};

CoercivityReport coercivity_certificate(int dim, int cutoff);

struct DeficitOptions {
  int tau_panels = 128;
  int tau_nodes = 8;
};

// \iint_{(-pi/2,pi/2) x R^N} |e^{-i tau H/2} u|^{2+4/N}, exact in y for band-limited u.
double linear_spacetime_norm(const SpectralState& u, const DeficitOptions& options = {});

// C_S (\int |G_0 + eps phi|^2)^{1+2/N} - \iint |e^{-i tau H/2}(G_0 + eps phi)|^{2+4/N}
double strichartz_deficit(const SpectralState& phi, double eps, const DeficitOptions& options = {});

}  // namespace strichartz
