// Hermite functions h_n(y) = H_n(y) e^{-y^2/2} / sqrt(2^n n!), normalized so that
// ||h_n||^2 = sqrt(pi); these are the eigenfunctions of -d^2/dy^2 + y^2. The
// spectral state type and the grid <-> coefficient transforms live here too.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "strichartz/quadrature.hpp"

namespace strichartz {

using cplx = std::complex<double>;

struct EigenIndex {
  int dim = 1;
  int j = 0;
  int k = 0;

  static EigenIndex of(int n) { return {1, n, 0}; }
  static EigenIndex of(int j, int k) { return {2, j, k}; }

  // Total degree: n in 1D, j+k in 2D.
  int level() const { return dim == 1 ? j : j + k; }
  // Oscillator eigenvalue 2n+1 (1D) or 2(j+k)+2 (2D).
  double eigenvalue() const { return 2.0 * level() + dim; }
};

double hermite_function(int n, double y);
double hermite_function(const EigenIndex& index, double y1, double y2 = 0.0);

// Writes h_0(y), ..., h_{count-1}(y) to out. Stable for large n and |y| via
// rescaling inside the recurrence.
void hermite_functions(int count, double y, double* out);
std::vector<double> hermite_functions(int count, double y);

// sum_{k<count} h_k(y)^2 = returned value * e^{log_scale}.
double hermite_square_sum(int count, double y, double* log_scale);

double log_factorial(int n);

// \int e^{-y^2} h_j(y)^2 dy in closed form.
double wang_diagonal(int j);

// Coefficient of h_{2j} in e^{-5y^2/2} (so the value is alpha_{2j}); odd
// coefficients vanish.
double alpha_coefficient(int j);
// alpha_k = (1/sqrt(pi)) \int e^{-5y^2/2} h_k(y) dy by quadrature.
double alpha_by_quadrature(int k, const QuadratureRule& rule);

// Coefficients over the oscillator eigenbasis. `cutoff` is the number of
// retained modes per dimension (indices 0..cutoff-1); 2D coefficients are
// stored row-major as c[j * cutoff + k].
class SpectralState {
 public:
  SpectralState() = default;
  SpectralState(int dim, int cutoff);
  SpectralState(int dim, int cutoff, std::vector<cplx> coeffs);

  static SpectralState unit(const EigenIndex& index, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  cplx* data() { return coeffs_.data(); }
  const cplx* data() const { return coeffs_.data(); }

  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& at(const EigenIndex& index);
  cplx at(const EigenIndex& index) const;
  EigenIndex index_of(std::size_t flat) const;
  std::size_t flat_index(const EigenIndex& index) const;

  // ||h_alpha||^2: sqrt(pi) in 1D, pi in 2D.
  double basis_norm2() const;
  double mass() const;
  // \int conj(this) * other dy
  cplx inner(const SpectralState& other) const;
  // Copy with a different cutoff (truncating or zero padding).
  SpectralState resized(int cutoff) const;

  SpectralState& operator+=(const SpectralState& other);
  SpectralState& operator-=(const SpectralState& other);
  SpectralState& operator*=(cplx s);

 private:
  void check_compatible(const SpectralState& other) const;

  int dim_ = 1;
  int cutoff_ = 0;
  std::vector<cplx> coeffs_;
};

SpectralState operator+(SpectralState a, const SpectralState& b);
SpectralState operator-(SpectralState a, const SpectralState& b);
SpectralState operator*(cplx s, SpectralState a);
double max_abs_difference(const SpectralState& a, const SpectralState& b);

// Samples on the tensor grid of a quadrature rule; in 2D values[i * order + l]
// is the sample at (nodes[i], nodes[l]).
struct GridField {
  int dim = 1;
  int order = 0;
  std::vector<cplx> values;
};

GridField sample_grid(int dim, const QuadratureRule& rule, const std::function<cplx(double, double)>& f);
// \int F over the grid using the scaled weights.
cplx integrate_grid(const GridField& field, const QuadratureRule& rule);

// Dense transforms between coefficients and grid samples for a fixed rule and
// cutoff; 2D transforms are applied one dimension at a time.
class HermiteTransform {
 public:
  HermiteTransform(int dim, int cutoff, QuadratureRule rule);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  const QuadratureRule& rule() const { return rule_; }
  std::size_t grid_size() const;
  std::size_t coeff_size() const;

  GridField synthesize(const SpectralState& state) const;
  SpectralState analyze(const GridField& field) const;

  // Raw variants; `grid` and `coeffs` must have grid_size() / coeff_size() entries.
  void synthesize_into(const cplx* coeffs, cplx* grid) const;
  void analyze_into(const cplx* grid, cplx* coeffs) const;

  // h_n(y_i) at node i for n < cutoff, row-major (order x cutoff).
  const std::vector<double>& synthesis_matrix() const { return synth_; }

 private:
  int dim_;
  int cutoff_;
  QuadratureRule rule_;
  std::vector<double> synth_;     // order x cutoff
  std::vector<double> analysis_;  // cutoff x order
};

SpectralState analyze(const GridField& samples, const QuadratureRule& rule, int cutoff);
GridField synthesize(const SpectralState& state, const QuadratureRule& rule);

// Value of the expansion at an arbitrary point.
cplx evaluate(const SpectralState& state, double y1, double y2 = 0.0);

}  // namespace strichartz
