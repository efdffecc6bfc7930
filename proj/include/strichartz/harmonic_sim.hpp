// Strang-split integration of the harmonic-frame NLS
//   i v_tau - (1/2) H v = -gamma |v|^{4/N} v,   tau in (-pi/2, pi/2),
// in the Hermite eigenbasis, plus the space-time norm functional and the
// small-mass expansion experiments built on it.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strichartz/hermite.hpp"

namespace strichartz {

struct SimConfig {
  int dim = 1;
  double delta = 0.1;
  double gamma = 1.0;  // +1 focusing, -1 defocusing
  int cutoff = 96;     // modes per dimension
  int steps = 4096;    // over the whole interval (-pi/2, pi/2); must be even
  int quadrature_order = 0;  // 0 selects the de-aliasing default
  bool nonlinear = true;
  bool store_states = false;
  double mass_tolerance = 1e-8;

  static SimConfig defaults(int dim);
};

// Smallest grid order that integrates the nonlinearity of a band-limited state
// without aliasing: max(2c+8, 3c) in 1D, max(2c+8, 2c) in 2D.
int dealiased_order(int dim, int cutoff);
int effective_order(const SimConfig& config);
// Throws DomainError for inconsistent configurations.
void validate(const SimConfig& config);

struct Trajectory {
  SimConfig config;
  std::vector<double> taus;            // step boundaries, ascending
  std::vector<SpectralState> states;   // filled when config.store_states
  std::vector<double> masses;
  std::vector<double> power_samples;   // \int |v(tau_n)|^{2+4/N} dy
  double mass_drift = 0.0;             // max relative deviation from the initial mass
};

// Called at every step boundary with the state and its samples on the grid.
using StepObserver = std::function<void(std::size_t index, double tau, const SpectralState& state,
                                        const std::vector<cplx>& grid)>;

// Evolves from tau = 0 backward to -pi/2 and forward to +pi/2. The initial
// state defaults to delta * G_0; a supplied state is used as given.
Trajectory evolve(const SimConfig& config, const std::optional<SpectralState>& initial = std::nullopt,
                  const StepObserver& observer = {});

// State at tau_target reached in `steps` Strang steps from `initial` at tau = 0.
SpectralState evolve_to(const SimConfig& config, const SpectralState& initial, double tau_target, int steps);

// \iint |v|^p over the trajectory: composite Simpson across step boundaries in
// tau, Gauss-Hermite in y. p defaults to 2 + 4/N.
double spacetime_norm(const Trajectory& trajectory, std::optional<double> p = std::nullopt);

struct ExpansionRow {
  double delta = 0.0;
  double norm = 0.0;          // S(delta)
  double scaled_deficit = 0.0;  // (S - C_S delta^{2+4/N}) / delta^{2+8/N}
  double mass_drift = 0.0;
};

struct ExpansionReport {
  int dim = 1;
  double gamma = 1.0;
  int cutoff = 0;
  int steps = 0;
  std::vector<ExpansionRow> rows;
  double extrapolated = 0.0;
  double reference = 0.0;  // gamma * D_N
  double relative_error = 0.0;
  double smallest_delta_relative_error = 0.0;
  bool monotone = false;   // error against the reference shrinks with delta
  std::vector<double> ratio_test;  // (D(d_i) - D(d_{i+1})) / (D(d_{i+1}) - D(d_{i+2}))
  double expected_ratio = 0.0;
  std::vector<std::string> diagnostics;
};

ExpansionReport expansion_experiment(int dim, double gamma, const std::vector<double>& deltas,
                                     const SimConfig& base);

struct PerturbationRow {
  double delta = 0.0;
  double error = 0.0;  // ||v - delta (G~ + gamma delta^{4/N} r~)||_{L^p_{tau,y}}
};

struct PerturbationReport {
  int dim = 1;
  double gamma = 1.0;
  std::vector<PerturbationRow> rows;
  double slope = 0.0;           // least-squares slope of log error against log delta
  double expected_slope = 0.0;  // 1 + 8/N
};

PerturbationReport perturbation_order_check(int dim, const std::vector<double>& deltas, const SimConfig& base);

struct SplittingConvergence {
  std::vector<int> steps;
  std::vector<double> norms;
  std::vector<double> differences;  // |S(steps_i) - S(steps_{i+1})|
  std::vector<double> ratios;       // differences_i / differences_{i+1}
};

SplittingConvergence splitting_convergence(const SimConfig& base, int doublings);

}  // namespace strichartz
