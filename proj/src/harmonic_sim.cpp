#include "strichartz/harmonic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "strichartz/constants.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/kernels.hpp"

namespace strichartz {
namespace {

constexpr double kPi = std::numbers::pi;

double critical_power(int dim) { return 2.0 + 4.0 / dim; }

std::vector<double> grid_weights(int dim, const QuadratureRule& rule) {
  if (dim == 1) return rule.scaled_weights;
  const std::size_t q = rule.scaled_weights.size();
  std::vector<double> w(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t l = 0; l < q; ++l) w[i * q + l] = rule.scaled_weights[i] * rule.scaled_weights[l];
  return w;
}

// One Strang step: half linear phase, pointwise nonlinear phase on the grid,
// half linear phase. Also evaluates \int |v|^{2+4/N} at step boundaries.
class Stepper {
 public:
  explicit Stepper(const SimConfig& config)
      : config_(config),
        transform_(config.dim, config.cutoff, cached_gauss_hermite_rule(effective_order(config))),
        weights_(grid_weights(config.dim, transform_.rule())),
        grid_(transform_.grid_size()),
        modulus_(transform_.grid_size()),
        rotation_(transform_.grid_size()),
        lambda_(transform_.coeff_size()) {
    const SpectralState shape(config.dim, config.cutoff);
    for (std::size_t i = 0; i < lambda_.size(); ++i) lambda_[i] = shape.index_of(i).eigenvalue();
  }

  void set_step(double dt) {
    if (dt == dt_) return;
    dt_ = dt;
    half_phase_.resize(lambda_.size());
    for (std::size_t i = 0; i < lambda_.size(); ++i) half_phase_[i] = std::polar(1.0, -0.25 * lambda_[i] * dt);
  }

  void step(SpectralState& v) {
    const auto& k = kernels::active();
    k.cmul(v.data(), half_phase_.data(), v.size());
    if (config_.nonlinear) {
      transform_.synthesize_into(v.data(), grid_.data());
      k.abs2(grid_.data(), modulus_.data(), grid_.size());
      const double scale = config_.gamma * dt_;
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double a = config_.dim == 1 ? modulus_[i] * modulus_[i] : modulus_[i];
        rotation_[i] = std::polar(1.0, scale * a);
      }
      k.cmul(grid_.data(), rotation_.data(), grid_.size());
      transform_.analyze_into(grid_.data(), v.data());
    }
    k.cmul(v.data(), half_phase_.data(), v.size());
  }

  // Refreshes grid() with the samples of v and returns \int |v|^{2+4/N}.
  double sample(const SpectralState& v) {
    transform_.synthesize_into(v.data(), grid_.data());
    const int half_power = config_.dim == 1 ? 3 : 2;
    return kernels::active().weighted_power_sum(weights_.data(), grid_.data(), grid_.size(), half_power);
  }

  const std::vector<cplx>& grid() const { return grid_; }
  const HermiteTransform& transform() const { return transform_; }

 private:
  SimConfig config_;
  HermiteTransform transform_;
  std::vector<double> weights_;
  std::vector<cplx> grid_;
  std::vector<double> modulus_;
  std::vector<cplx> rotation_;
  std::vector<double> lambda_;
  std::vector<cplx> half_phase_;
  double dt_ = std::numeric_limits<double>::quiet_NaN();
};

double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  double s = f.front() + f.back();
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

void check_initial(const SimConfig& config, const SpectralState& s) {
  if (s.dim() != config.dim || s.cutoff() != config.cutoff)
    throw DomainError("initial state shape does not match the configuration");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SimConfig SimConfig::defaults(int dim) {
  SimConfig c;
  c.dim = dim;
  c.cutoff = dim == 1 ? 96 : 48;
  return c;
}

int dealiased_order(int dim, int cutoff) {
  const int base = default_quadrature_order(cutoff);
  return std::max(base, (dim == 1 ? 3 : 2) * cutoff);
}

int effective_order(const SimConfig& config) {
  return config.quadrature_order > 0 ? config.quadrature_order : dealiased_order(config.dim, config.cutoff);
}

void validate(const SimConfig& config) {
  if (config.dim != 1 && config.dim != 2) throw DomainError("simulation: dim must be 1 or 2");
  if (config.cutoff < 16) throw DomainError("simulation: cutoff must be >= 16");
  if (config.steps < 2 || config.steps % 2 != 0) throw DomainError("simulation: steps must be even and >= 2");
  if (!(config.delta >= 0.0 && config.delta <= 1.0)) throw DomainError("simulation: delta must lie in [0, 1]");
  if (config.gamma != 1.0 && config.gamma != -1.0) throw DomainError("simulation: gamma must be +1 or -1");
  if (config.quadrature_order > 0 && config.quadrature_order < dealiased_order(config.dim, config.cutoff))
    throw DomainError("simulation: quadrature order " + std::to_string(config.quadrature_order) +
                      " is below the de-aliasing requirement " +
                      std::to_string(dealiased_order(config.dim, config.cutoff)));
}

Trajectory evolve(const SimConfig& config, const std::optional<SpectralState>& initial, const StepObserver& observer) {
  validate(config);
  SpectralState v0 = initial ? *initial : SpectralState(gaussian_datum(config.dim, config.cutoff));
  if (initial) check_initial(config, v0);
  else v0 *= config.delta;

  Stepper stepper(config);
  const int n = config.steps;
  const int mid = n / 2;
  const double dt = kPi / n;

  Trajectory traj;
  traj.config = config;
  traj.taus.resize(n + 1);
  for (int i = 0; i <= n; ++i) traj.taus[i] = (i - mid) * dt;
  traj.masses.resize(n + 1);
  traj.power_samples.resize(n + 1);
  if (config.store_states) traj.states.resize(n + 1);

  const double m0 = v0.mass();
  auto record = [&](int i, const SpectralState& v) {
    traj.power_samples[i] = stepper.sample(v);
    const double m = v.mass();
    traj.masses[i] = m;
    if (!std::isfinite(m) || !std::isfinite(traj.power_samples[i]))
      throw NumericalError("simulation: non-finite state at tau = " + std::to_string(traj.taus[i]));
    const double drift = m0 > 0.0 ? std::abs(m - m0) / m0 : m;
    traj.mass_drift = std::max(traj.mass_drift, drift);
    if (drift > config.mass_tolerance)
      throw NumericalError("simulation: relative mass drift " + std::to_string(drift) + " at tau = " +
                           std::to_string(traj.taus[i]) + " exceeds " + std::to_string(config.mass_tolerance));
    if (config.store_states) traj.states[i] = v;
    if (observer) observer(static_cast<std::size_t>(i), traj.taus[i], v, stepper.grid());
  };

  record(mid, v0);
  SpectralState v = v0;
  stepper.set_step(-dt);
  for (int i = mid - 1; i >= 0; --i) {
    stepper.step(v);
    record(i, v);
  }
  v = v0;
  stepper.set_step(dt);
  for (int i = mid + 1; i <= n; ++i) {
    stepper.step(v);
    record(i, v);
  }
  return traj;
}

SpectralState evolve_to(const SimConfig& config, const SpectralState& initial, double tau_target, int steps) {
  if (steps < 1) throw DomainError("evolve_to: steps must be >= 1");
  if (std::abs(tau_target) > kPi / 2) throw DomainError("evolve_to: |tau| must be <= pi/2");
  SimConfig c = config;
  c.steps = 2;
  validate(c);
  check_initial(c, initial);
  Stepper stepper(c);
  stepper.set_step(tau_target / steps);
  SpectralState v = initial;
  for (int i = 0; i < steps; ++i) stepper.step(v);
  return v;
}

double spacetime_norm(const Trajectory& traj, std::optional<double> p) {
  const SimConfig& c = traj.config;
  if (traj.power_samples.size() != static_cast<std::size_t>(c.steps) + 1)
    throw DomainError("spacetime_norm: trajectory is incomplete");
  if (effective_order(c) < dealiased_order(c.dim, c.cutoff))
    throw DomainError("spacetime_norm: quadrature order below the configuration requirement");
  const double dt = kPi / c.steps;
  const double power = p.value_or(critical_power(c.dim));
  if (std::abs(power - critical_power(c.dim)) < 1e-15) return simpson(traj.power_samples, dt);
  if (traj.states.empty())
    throw DomainError("spacetime_norm: exponents other than 2+4/N need stored states (store_states)");
  if (!(power >= 1.0)) throw DomainError("spacetime_norm: p must be >= 1");
  const QuadratureRule& rule = cached_gauss_hermite_rule(effective_order(c));
  const HermiteTransform transform(c.dim, c.cutoff, rule);
  const std::vector<double> w = grid_weights(c.dim, rule);
  std::vector<cplx> grid(transform.grid_size());
  std::vector<double> samples(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    transform.synthesize_into(traj.states[i].data(), grid.data());
    double s = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) s += w[g] * std::pow(std::abs(grid[g]), power);
    samples[i] = s;
  }
  return simpson(samples, dt);
}

ExpansionReport expansion_experiment(int dim, double gamma, const std::vector<double>& deltas, const SimConfig& base) {
  if (deltas.size() < 2) throw DomainError("expansion_experiment: need at least two deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] <= 0.3)) throw DomainError("expansion_experiment: deltas must lie in (0, 0.3]");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw DomainError("expansion_experiment: deltas must be decreasing");
  }
  ExpansionReport rep;
  rep.dim = dim;
  rep.gamma = gamma;
  rep.cutoff = base.cutoff;
  rep.steps = base.steps;
  const double p = critical_power(dim);
  const double cs = strichartz_constant(dim);
  const double order = 4.0 / dim;
  for (double d : deltas) {
    SimConfig c = base;
    c.dim = dim;
    c.gamma = gamma;
    c.delta = d;
    c.nonlinear = true;
    c.store_states = false;
    const Trajectory traj = evolve(c);
    ExpansionRow row;
    row.delta = d;
    row.norm = spacetime_norm(traj);
    row.scaled_deficit = (row.norm - cs * std::pow(d, p)) / std::pow(d, 2.0 + 8.0 / dim);
    row.mass_drift = traj.mass_drift;
    rep.rows.push_back(row);
  }
  const std::size_t n = rep.rows.size();
  const double d1 = rep.rows[n - 2].delta, d2 = rep.rows[n - 1].delta;
  const double f1 = rep.rows[n - 2].scaled_deficit, f2 = rep.rows[n - 1].scaled_deficit;
  const double w1 = std::pow(d1, order), w2 = std::pow(d2, order);
  rep.extrapolated = (f2 * w1 - f1 * w2) / (w1 - w2);
  rep.reference = gamma * (dim == 1 ? d1_series(400) : d2_closed());
  rep.relative_error = std::abs(rep.extrapolated - rep.reference) / std::abs(rep.reference);
  rep.smallest_delta_relative_error = std::abs(f2 - rep.reference) / std::abs(rep.reference);
  rep.monotone = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(rep.rows[i].scaled_deficit - rep.reference) > std::abs(rep.rows[i - 1].scaled_deficit - rep.reference)) {
      rep.monotone = false;
      rep.diagnostics.push_back("non-monotone convergence between delta = " + std::to_string(rep.rows[i - 1].delta) +
                                " and delta = " + std::to_string(rep.rows[i].delta));
    }
  }
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double a = rep.rows[i].scaled_deficit - rep.rows[i + 1].scaled_deficit;
    const double b = rep.rows[i + 1].scaled_deficit - rep.rows[i + 2].scaled_deficit;
    rep.ratio_test.push_back(a / b);
  }
  rep.expected_ratio = std::pow(deltas[0] / deltas[1], order);
  if ((rep.extrapolated > 0) != (gamma > 0)) rep.diagnostics.push_back("extrapolated constant has the wrong sign");
  return rep;
}

PerturbationReport perturbation_order_check(int dim, const std::vector<double>& deltas, const SimConfig& base) {
  if (deltas.size() < 2) throw DomainError("perturbation_order_check: need at least two deltas");
  PerturbationReport rep;
  rep.dim = dim;
  rep.gamma = base.gamma;
  rep.expected_slope = 1.0 + 8.0 / dim;
  const double p = critical_power(dim);
  DuhamelOptions dopts;
  dopts.representation_tolerance = 1e-6;
  const DuhamelRemainder remainder(dim, base.cutoff, dopts);
  const SpectralState g0 = gaussian_datum(dim, base.cutoff);

  // Every run shares the same step boundaries, so the Duhamel time integrals are computed once.
  std::vector<std::vector<cplx>> level_cache(static_cast<std::size_t>(base.steps) + 1);

  std::vector<double> log_d, log_e;
  for (double d : deltas) {
    if (!(d > 0.0 && d <= 0.3)) throw DomainError("perturbation_order_check: deltas must lie in (0, 0.3]");
    SimConfig c = base;
    c.dim = dim;
    c.delta = d;
    c.nonlinear = true;
    c.store_states = false;
    const HermiteTransform transform(dim, c.cutoff, cached_gauss_hermite_rule(effective_order(c)));
    const std::vector<double> w = grid_weights(dim, transform.rule());
    std::vector<cplx> grid(transform.grid_size());
    std::vector<double> samples(static_cast<std::size_t>(c.steps) + 1);
    const double nonlinear_scale = c.gamma * std::pow(d, 4.0 / dim);
    auto observer = [&](std::size_t i, double tau, const SpectralState& v, const std::vector<cplx>&) {
      SpectralState approx = harmonic_propagate(g0, tau);
      if (level_cache[i].empty()) level_cache[i] = remainder.level_integrals(tau);
      approx += cplx(nonlinear_scale) * remainder.assemble(level_cache[i]);
      approx *= d;
      const SpectralState diff = v - approx;
      transform.synthesize_into(diff.data(), grid.data());
      double s = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) s += w[g] * std::pow(std::abs(grid[g]), p);
      samples[i] = s;
    };
    evolve(c, std::nullopt, observer);
    const double e = std::pow(simpson(samples, kPi / c.steps), 1.0 / p);
    rep.rows.push_back({d, e});
    log_d.push_back(std::log(d));
    log_e.push_back(std::log(e));
  }
  rep.slope = fit_slope(log_d, log_e);
  return rep;
}

SplittingConvergence splitting_convergence(const SimConfig& base, int doublings) {
  if (doublings < 2) throw DomainError("splitting_convergence: need at least two doublings");
  SplittingConvergence out;
  for (int i = 0; i <= doublings; ++i) {
    SimConfig c = base;
    c.steps = base.steps << i;
    c.store_states = false;
    out.steps.push_back(c.steps);
    out.norms.push_back(spacetime_norm(evolve(c)));
  }
  for (std::size_t i = 0; i + 1 < out.norms.size(); ++i) out.differences.push_back(std::abs(out.norms[i] - out.norms[i + 1]));
  for (std::size_t i = 0; i + 1 < out.differences.size(); ++i) out.ratios.push_back(out.differences[i] / out.differences[i + 1]);
  return out;
}

}  // namespace strichartz
