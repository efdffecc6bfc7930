#include "strichartz/gauge.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "strichartz/errors.hpp"
#include "strichartz/harmonic_sim.hpp"

namespace strichartz {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double vector_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Samples of a state on the tensor grid of arbitrary 1D node lists
// (nodes2 ignored in 1D); out[i * nodes2.size() + l].
std::vector<cplx> sample_at(const SpectralState& s, const std::vector<double>& nodes1, const std::vector<double>& nodes2) {
  const int m = s.cutoff();
  auto table = [m](const std::vector<double>& nodes) {
    std::vector<double> h(nodes.size() * m);
    for (std::size_t i = 0; i < nodes.size(); ++i) hermite_functions(m, nodes[i], h.data() + i * m);
    return h;
  };
  const std::vector<double> h1 = table(nodes1);
  if (s.dim() == 1) {
    std::vector<cplx> out(nodes1.size());
    for (std::size_t i = 0; i < nodes1.size(); ++i) {
      cplx acc{};
      for (int n = 0; n < m; ++n) acc += s[n] * h1[i * m + n];
      out[i] = acc;
    }
    return out;
  }
  const std::vector<double> h2 = table(nodes2);
  const std::size_t n1 = nodes1.size(), n2 = nodes2.size();
  // partial[i][k] = sum_j c_jk h_j(nodes1[i])
  std::vector<cplx> partial(n1 * m);
  for (std::size_t i = 0; i < n1; ++i)
    for (int j = 0; j < m; ++j) {
      const double hj = h1[i * m + j];
      if (hj == 0.0) continue;
      for (int k = 0; k < m; ++k) partial[i * m + k] += hj * s[static_cast<std::size_t>(j) * m + k];
    }
  std::vector<cplx> out(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t l = 0; l < n2; ++l) {
      cplx acc{};
      for (int k = 0; k < m; ++k) acc += partial[i * m + k] * h2[l * m + k];
      out[i * n2 + l] = acc;
    }
  return out;
}

}  // namespace

SymmetryParams SymmetryParams::identity(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("SymmetryParams: dim must be 1 or 2");
  SymmetryParams p;
  p.dim = dim;
  return p;
}

std::vector<double> SymmetryParams::pack() const {
  std::vector<double> v{theta, rho};
  for (int d = 0; d < dim; ++d) v.push_back(xi[d]);
  for (int d = 0; d < dim; ++d) v.push_back(x0[d]);
  v.push_back(t0);
  return v;
}

SymmetryParams SymmetryParams::unpack(int dim, const std::vector<double>& v) {
  SymmetryParams p = identity(dim);
  if (v.size() != static_cast<std::size_t>(3 + 2 * dim)) throw DomainError("SymmetryParams: expected 3 + 2N values");
  p.theta = v[0];
  p.rho = v[1];
  for (int d = 0; d < dim; ++d) {
    p.xi[d] = v[2 + d];
    p.x0[d] = v[2 + dim + d];
  }
  p.t0 = v[2 + 2 * dim];
  if (!(p.rho > 0.0)) throw DomainError("SymmetryParams: rho must be positive");
  return p;
}

std::vector<std::string> SymmetryParams::names(int dim) {
  if (dim == 1) return {"theta", "rho", "xi", "x0", "t0"};
  return {"theta", "rho", "xi1", "xi2", "x01", "x02", "t0"};
}

OrthoDecomposition decompose_datum(const SpectralState& f) {
  const SpectralState g0 = gaussian_datum(f.dim(), f.cutoff());
  OrthoDecomposition d;
  d.alpha = g0.inner(f).real();
  d.phi = f - cplx(d.alpha) * g0;
  return d;
}

std::vector<double> ortho_residuals(const SpectralState& phi) {
  const int dim = phi.dim();
  const int m = phi.cutoff();
  const QuadratureRule& rule = cached_gauss_hermite_rule(default_quadrature_order(m));
  const HermiteTransform transform(dim, m, rule);
  const GridField values = transform.synthesize(phi);
  auto pairing = [&](auto weight) {
    GridField prod = values;
    const std::size_t q = rule.order;
    for (std::size_t g = 0; g < prod.values.size(); ++g) {
      const double y1 = rule.nodes[dim == 1 ? g : g / q];
      const double y2 = dim == 1 ? 0.0 : rule.nodes[g % q];
      prod.values[g] *= weight(y1, y2) * std::real(lens_gaussian(dim, 0.0, {y1, y2}));
    }
    return std::abs(integrate_grid(prod, rule));
  };
  std::vector<double> out;
  out.push_back(pairing([](double, double) { return 1.0; }));
  out.push_back(pairing([](double y1, double y2) { return y1 * y1 + y2 * y2; }));
  out.push_back(pairing([](double y1, double) { return y1; }));
  if (dim == 2) out.push_back(pairing([](double, double y2) { return y2; }));
  return out;
}

GaugeProblem::GaugeProblem(double delta, SpectralState f, GaugeOptions options)
    : delta_(delta), f_(std::move(f)), options_(options) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("gauge: delta must lie in (0, 1]");
  if (f_.cutoff() < 16) throw DomainError("gauge: datum cutoff must be >= 16");
  if (options_.steps < 1) throw DomainError("gauge: steps must be >= 1");
  const int order = options_.quadrature_order > 0 ? options_.quadrature_order : default_quadrature_order(f_.cutoff());
  rule_ = cached_gauss_hermite_rule(order);
  const int dim = f_.dim();
  const std::size_t q = rule_.order;
  const std::size_t g = dim == 1 ? q : q * q;
  weights_.resize(g);
  g0_.resize(g);
  q_.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    const double y1 = rule_.nodes[dim == 1 ? i : i / q];
    const double y2 = dim == 1 ? 0.0 : rule_.nodes[i % q];
    weights_[i] = dim == 1 ? rule_.scaled_weights[i] : rule_.scaled_weights[i / q] * rule_.scaled_weights[i % q];
    g0_[i] = std::real(lens_gaussian(dim, 0.0, {y1, y2}));
    q_[i] = (y1 * y1 + y2 * y2 - 0.5 * dim) * g0_[i];
  }
}

const SpectralState& GaugeProblem::evolved(double t0) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(t0);
    if (it != cache_.end()) return it->second;
  }
  SpectralState data = f_;
  data *= delta_;
  SimConfig c;
  c.dim = f_.dim();
  c.cutoff = f_.cutoff();
  c.gamma = options_.gamma;
  c.delta = delta_;
  SpectralState v = t0 == 0.0 ? data : evolve_to(c, data, std::atan(t0), options_.steps);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.emplace(t0, std::move(v)).first->second;
}

std::vector<cplx> GaugeProblem::transformed_grid(const SymmetryParams& p) const {
  if (p.dim != dim()) throw DomainError("gauge: parameter dimension mismatch");
  if (!(p.rho > 0.0)) throw DomainError("gauge: rho must be positive");
  const int dim = this->dim();
  const SpectralState& v = evolved(p.t0);
  const double tau = std::atan(p.t0);
  const double c = std::cos(tau), s = std::sin(tau);
  const std::size_t q = rule_.order;
  std::vector<double> y1(q), y2(dim == 2 ? q : 0);
  for (std::size_t i = 0; i < q; ++i) {
    y1[i] = (p.rho * rule_.nodes[i] + p.x0[0]) * c;
    if (dim == 2) y2[i] = (p.rho * rule_.nodes[i] + p.x0[1]) * c;
  }
  std::vector<cplx> values = sample_at(v, y1, y2);
  // u(t0, z) = cos^{N/2}(tau) e^{i |z|^2 sin(tau) cos(tau) / 2} v(tau, z cos(tau)), z = rho x + x0
  const double amplitude = std::pow(c, 0.5 * dim) * std::pow(p.rho, 0.5 * dim);
  for (std::size_t g = 0; g < values.size(); ++g) {
    const std::size_t i = dim == 1 ? g : g / q;
    const std::size_t l = dim == 1 ? 0 : g % q;
    const double x1 = rule_.nodes[i], x2 = dim == 1 ? 0.0 : rule_.nodes[l];
    const double z1 = p.rho * x1 + p.x0[0], z2 = dim == 1 ? 0.0 : p.rho * x2 + p.x0[1];
    const double phase = p.theta + x1 * p.xi[0] + x2 * p.xi[1] + 0.5 * (z1 * z1 + z2 * z2) * s * c;
    values[g] *= amplitude * std::polar(1.0, phase);
  }
  return values;
}

SpectralState GaugeProblem::transformed_datum(const SymmetryParams& p) const {
  const std::vector<cplx> values = transformed_grid(p);
  GridField field{dim(), rule_.order, values};
  SpectralState out = analyze(field, rule_, cutoff());
  out *= 1.0 / delta_;
  return out;
}

double GaugeProblem::leakage(const SymmetryParams& p) const {
  const double m = f_.mass();
  return std::abs(transformed_datum(p).mass() - m) / m;
}

std::vector<double> GaugeProblem::residual(const SymmetryParams& p) const {
  const std::vector<cplx> values = transformed_grid(p);
  {
    GridField field{dim(), rule_.order, values};
    const double m = f_.mass();
    const double leak = std::abs(analyze(field, rule_, cutoff()).mass() / (delta_ * delta_) - m) / m;
    if (leak > options_.leakage_tolerance)
      throw NumericalError("gauge: transformed datum leaks " + std::to_string(leak) +
                           " of its mass outside the retained modes; parameters outside the admissible ball");
  }
  const int dim = this->dim();
  const std::size_t q = rule_.order;
  cplx with_g0{}, with_q{};
  std::array<cplx, 2> with_x{};
  for (std::size_t g = 0; g < values.size(); ++g) {
    const cplx u = delta_ * g0_[g] - values[g];
    const double w = weights_[g];
    with_g0 += w * u * g0_[g];
    with_q += w * u * q_[g];
    const double x1 = rule_.nodes[dim == 1 ? g : g / q];
    with_x[0] += w * u * x1 * g0_[g];
    if (dim == 2) with_x[1] += w * u * rule_.nodes[g % q] * g0_[g];
  }
  std::vector<double> r;
  r.push_back(with_g0.imag());
  r.push_back(with_q.real());
  for (int d = 0; d < dim; ++d) r.push_back(with_x[d].imag());
  for (int d = 0; d < dim; ++d) r.push_back(with_x[d].real());
  r.push_back(with_q.imag());
  for (double& x : r) x /= delta_;
  return r;
}

Eigen::MatrixXd GaugeProblem::jacobian(const SymmetryParams& p) const {
  const std::vector<double> base = p.pack();
  const int n = static_cast<int>(base.size());
  Eigen::MatrixXd j(n, n);
  const double h = options_.fd_step;
  auto column = [&](int c) {
    std::vector<double> plus = base, minus = base;
    plus[c] += h;
    minus[c] -= h;
    const std::vector<double> rp = residual(SymmetryParams::unpack(dim(), plus));
    const std::vector<double> rm = residual(SymmetryParams::unpack(dim(), minus));
    for (int r = 0; r < n; ++r) j(r, c) = (rp[r] - rm[r]) / (2.0 * h);
  };
  // Columns are independent solver runs writing disjoint entries.
  const int threads = options_.threads > 0 ? options_.threads
                                           : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads > 1) {
    for (int first = 0; first < n; first += threads) {
      std::vector<std::future<void>> jobs;
      for (int c = first; c < std::min(n, first + threads); ++c) jobs.push_back(std::async(std::launch::async, column, c));
      for (auto& job : jobs) job.get();
    }
  } else {
    for (int c = 0; c < n; ++c) column(c);
  }
  return j;
}

std::vector<double> phi_residual(double delta, const SymmetryParams& p, const SpectralState& f,
                                 const GaugeOptions& options) {
  return GaugeProblem(delta, f, options).residual(p);
}

Eigen::MatrixXd jacobian_at_reference(double delta, int dim, int cutoff, const GaugeOptions& options) {
  const GaugeProblem problem(delta, gaussian_datum(dim, cutoff), options);
  return problem.jacobian(SymmetryParams::identity(dim));
}

Eigen::MatrixXd reference_jacobian(double delta, int dim, double gamma, bool with_correction) {
  if (dim != 1 && dim != 2) throw DomainError("reference_jacobian: dim must be 1 or 2");
  const int n = 3 + 2 * dim;
  const double nd = dim;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  j(0, 0) = -1.0;
  j(1, 1) = nd / 2.0;
  for (int d = 0; d < dim; ++d) {
    j(2 + d, 2 + d) = -0.5;
    j(2 + dim + d, 2 + dim + d) = 0.5;
  }
  j(0, n - 1) = nd / 4.0;
  j(n - 1, n - 1) = -nd / 4.0;
  if (with_correction) {
    // G_0^{2+4/N} = pi^{-(N+2)/2} e^{-a|x|^2} with a = (N+2)/N
    const double a = (nd + 2.0) / nd;
    const double base = std::pow(kPi, -(nd + 2.0) / 2.0) * std::pow(kPi / a, nd / 2.0);
    const double second_moment = nd / (2.0 * a);  // \int |x|^2 e^{-a|x|^2} / \int e^{-a|x|^2}
    const double scale = gamma * std::pow(delta, 4.0 / nd);
    j(0, n - 1) -= scale * base;
    j(n - 1, n - 1) -= scale * base * (second_moment - nd / 2.0);
  }
  return j;
}

GaugeResult newton_gauge_fix(double delta, const SpectralState& f, double tol, const GaugeOptions& options,
                             const SymmetryParams* start) {
  if (!(tol > 0.0)) throw DomainError("newton_gauge_fix: tolerance must be positive");
  const GaugeProblem problem(delta, f, options);
  const int dim = f.dim();
  SymmetryParams p = start ? *start : SymmetryParams::identity(dim);
  std::vector<double> r = problem.residual(p);
  double norm = vector_norm(r);
  GaugeResult out;
  out.history.push_back(norm);
  int it = 0;
  while (norm > tol) {
    if (it == options.max_iterations)
      throw NumericalError("newton_gauge_fix: no convergence after " + std::to_string(it) +
                           " iterations; last residual norm " + std::to_string(norm));
    ++it;
    const Eigen::MatrixXd j = problem.jacobian(p);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
    if (lu.rank() < j.rows()) throw NumericalError("newton_gauge_fix: singular Jacobian");
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
    const Eigen::VectorXd step = lu.solve(rhs);
    const std::vector<double> base = p.pack();
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
      std::vector<double> trial = base;
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] -= lambda * step[static_cast<Eigen::Index>(k)];
      if (!(trial[1] > 0.0)) continue;
      const SymmetryParams candidate = SymmetryParams::unpack(dim, trial);
      std::vector<double> r_new;
      try {
        r_new = problem.residual(candidate);
      } catch (const NumericalError&) {
        continue;  // outside the admissible ball: shorten the step
      }
      const double n_new = vector_norm(r_new);
      if (n_new < norm) {
        p = candidate;
        r = std::move(r_new);
        norm = n_new;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NumericalError("newton_gauge_fix: step halving failed to reduce the residual (norm " +
                           std::to_string(norm) + ")");
    out.history.push_back(norm);
  }
  out.params = p;
  out.residual = r;
  out.residual_norm = norm;
  out.iterations = it;
  out.datum = problem.transformed_datum(p);
  out.decomposition = decompose_datum(out.datum);
  out.ortho = ortho_residuals(out.decomposition.phi);
  out.mass_error = std::abs(out.datum.mass() - f.mass()) / f.mass();
  return out;
}

SpectralState plant_symmetry(const SymmetryParams& p, int cutoff) {
  if (!(p.rho > 0.0)) throw DomainError("plant_symmetry: rho must be positive");
  const int dim = p.dim;
  const QuadratureRule& rule = cached_gauss_hermite_rule(default_quadrature_order(cutoff));
  const GridField samples = sample_grid(dim, rule, [&](double z1, double z2) {
    const double u1 = (z1 - p.x0[0]) / p.rho;
    const double u2 = dim == 2 ? (z2 - p.x0[1]) / p.rho : 0.0;
    const double phase = -p.theta - p.xi[0] * u1 - (dim == 2 ? p.xi[1] * u2 : 0.0);
    return std::pow(p.rho, -0.5 * dim) * std::polar(1.0, phase) * lens_gaussian(dim, 0.0, {u1, u2});
  });
  return analyze(samples, rule, cutoff);
}

}  // namespace strichartz
