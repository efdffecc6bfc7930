#include "strichartz/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "strichartz/errors.hpp"
#include "strichartz/kernels.hpp"

namespace strichartz {
namespace {

constexpr double kRescaleAt = 1e100;
constexpr double kRescaleBy = 1e-100;
const double kLogRescale = std::log(1e100);

}  // namespace

void hermite_functions(int count, double y, double* out) {
  if (count <= 0) return;
  double log_scale = -0.5 * y * y;
  double prev = 0.0, cur = 1.0;
  out[0] = std::exp(log_scale);
  for (int n = 0; n + 1 < count; ++n) {
    const double next = (n == 0) ? std::sqrt(2.0) * y * cur
                                 : std::sqrt(2.0 / (n + 1)) * y * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAt) {
      cur *= kRescaleBy;
      prev *= kRescaleBy;
      log_scale += kLogRescale;
    }
    out[n + 1] = cur * std::exp(log_scale);
  }
}

std::vector<double> hermite_functions(int count, double y) {
  std::vector<double> out(std::max(count, 0));
  hermite_functions(count, y, out.data());
  return out;
}

double hermite_function(int n, double y) {
  if (n < 0) throw DomainError("hermite_function: negative index");
  double log_scale = -0.5 * y * y;
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = (k == 0) ? std::sqrt(2.0) * y * cur
                                 : std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAt) {
      cur *= kRescaleBy;
      prev *= kRescaleBy;
      log_scale += kLogRescale;
    }
  }
  return cur * std::exp(log_scale);
}

double hermite_function(const EigenIndex& index, double y1, double y2) {
  if (index.dim == 1) return hermite_function(index.j, y1);
  if (index.dim != 2) throw DomainError("hermite_function: dim must be 1 or 2");
  return hermite_function(index.j, y1) * hermite_function(index.k, y2);
}

double hermite_square_sum(int count, double y, double* log_scale) {
  double scale = -0.5 * y * y;
  double prev = 0.0, cur = 1.0, sum = 1.0;
  for (int n = 0; n + 1 < count; ++n) {
    const double next = (n == 0) ? std::sqrt(2.0) * y * cur
                                 : std::sqrt(2.0 / (n + 1)) * y * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAt) {
      cur *= kRescaleBy;
      prev *= kRescaleBy;
      sum *= kRescaleBy * kRescaleBy;
      scale += kLogRescale;
    }
    sum += cur * cur;
  }
  *log_scale = 2.0 * scale;
  return sum;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

double wang_diagonal(int j) {
  if (j < 0) throw DomainError("wang_diagonal: negative index");
  const double log_ratio = log_factorial(2 * j) - 2.0 * j * std::numbers::ln2 - 2.0 * log_factorial(j);
  return std::exp(log_ratio) * std::sqrt(std::numbers::pi / 2.0);
}

double alpha_coefficient(int j) {
  if (j < 0) throw DomainError("alpha_coefficient: negative index");
  const double magnitude = std::exp(0.5 * log_factorial(2 * j) - j * std::log(3.0) - log_factorial(j)) / std::sqrt(3.0);
  return (j % 2 == 0) ? magnitude : -magnitude;
}

double alpha_by_quadrature(int k, const QuadratureRule& rule) {
  double sum = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double y = rule.nodes[i];
    sum += rule.scaled_weights[i] * std::exp(-2.5 * y * y) * hermite_function(k, y);
  }
  return sum / std::sqrt(std::numbers::pi);
}

// ---------------------------------------------------------------- SpectralState

SpectralState::SpectralState(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim != 1 && dim != 2) throw DomainError("SpectralState: dim must be 1 or 2");
  if (cutoff < 1) throw DomainError("SpectralState: cutoff must be >= 1");
  coeffs_.assign(dim == 1 ? cutoff : static_cast<std::size_t>(cutoff) * cutoff, cplx{});
}

SpectralState::SpectralState(int dim, int cutoff, std::vector<cplx> coeffs) : SpectralState(dim, cutoff) {
  if (coeffs.size() != coeffs_.size())
    throw DomainError("SpectralState: expected " + std::to_string(coeffs_.size()) + " coefficients, got " +
                      std::to_string(coeffs.size()));
  coeffs_ = std::move(coeffs);
}

SpectralState SpectralState::unit(const EigenIndex& index, int cutoff) {
  SpectralState s(index.dim, cutoff);
  s.at(index) = 1.0;
  return s;
}

std::size_t SpectralState::flat_index(const EigenIndex& index) const {
  if (index.dim != dim_) throw DomainError("SpectralState: index dimension mismatch");
  if (index.j < 0 || index.j >= cutoff_ || (dim_ == 2 && (index.k < 0 || index.k >= cutoff_)))
    throw DomainError("SpectralState: index beyond cutoff");
  return dim_ == 1 ? static_cast<std::size_t>(index.j) : static_cast<std::size_t>(index.j) * cutoff_ + index.k;
}

cplx& SpectralState::at(const EigenIndex& index) { return coeffs_[flat_index(index)]; }
cplx SpectralState::at(const EigenIndex& index) const { return coeffs_[flat_index(index)]; }

EigenIndex SpectralState::index_of(std::size_t flat) const {
  if (dim_ == 1) return EigenIndex::of(static_cast<int>(flat));
  return EigenIndex::of(static_cast<int>(flat / cutoff_), static_cast<int>(flat % cutoff_));
}

double SpectralState::basis_norm2() const { return dim_ == 1 ? std::sqrt(std::numbers::pi) : std::numbers::pi; }

double SpectralState::mass() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::norm(c);
  return basis_norm2() * s;
}

cplx SpectralState::inner(const SpectralState& other) const {
  check_compatible(other);
  cplx s{};
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s += std::conj(coeffs_[i]) * other.coeffs_[i];
  return basis_norm2() * s;
}

SpectralState SpectralState::resized(int cutoff) const {
  SpectralState out(dim_, cutoff);
  const int m = std::min(cutoff, cutoff_);
  if (dim_ == 1) {
    for (int n = 0; n < m; ++n) out.coeffs_[n] = coeffs_[n];
  } else {
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) out.coeffs_[j * cutoff + k] = coeffs_[j * cutoff_ + k];
  }
  return out;
}

void SpectralState::check_compatible(const SpectralState& other) const {
  if (dim_ != other.dim_ || cutoff_ != other.cutoff_) throw DomainError("SpectralState: dimension/cutoff mismatch");
}

SpectralState& SpectralState::operator+=(const SpectralState& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralState& SpectralState::operator-=(const SpectralState& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralState& SpectralState::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

SpectralState operator+(SpectralState a, const SpectralState& b) { return a += b; }
SpectralState operator-(SpectralState a, const SpectralState& b) { return a -= b; }
SpectralState operator*(cplx s, SpectralState a) { return a *= s; }

double max_abs_difference(const SpectralState& a, const SpectralState& b) {
  if (a.dim() != b.dim() || a.cutoff() != b.cutoff()) throw DomainError("max_abs_difference: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- grids

GridField sample_grid(int dim, const QuadratureRule& rule, const std::function<cplx(double, double)>& f) {
  GridField g{dim, rule.order, {}};
  const int q = rule.order;
  if (dim == 1) {
    g.values.resize(q);
    for (int i = 0; i < q; ++i) g.values[i] = f(rule.nodes[i], 0.0);
  } else if (dim == 2) {
    g.values.resize(static_cast<std::size_t>(q) * q);
    for (int i = 0; i < q; ++i)
      for (int l = 0; l < q; ++l) g.values[static_cast<std::size_t>(i) * q + l] = f(rule.nodes[i], rule.nodes[l]);
  } else {
    throw DomainError("sample_grid: dim must be 1 or 2");
  }
  return g;
}

cplx integrate_grid(const GridField& field, const QuadratureRule& rule) {
  const int q = rule.order;
  if (field.order != q) throw DomainError("integrate_grid: grid/rule order mismatch");
  const auto& k = kernels::active();
  if (field.dim == 1) {
    cplx s;
    k.gemv(rule.scaled_weights.data(), 1, q, field.values.data(), &s);
    return s;
  }
  std::vector<cplx> rows(q);
  for (int i = 0; i < q; ++i)
    k.gemv(rule.scaled_weights.data(), 1, q, field.values.data() + static_cast<std::size_t>(i) * q, &rows[i]);
  cplx s;
  k.gemv(rule.scaled_weights.data(), 1, q, rows.data(), &s);
  return s;
}

// ---------------------------------------------------------------- transforms

HermiteTransform::HermiteTransform(int dim, int cutoff, QuadratureRule rule)
    : dim_(dim), cutoff_(cutoff), rule_(std::move(rule)) {
  if (dim != 1 && dim != 2) throw DomainError("HermiteTransform: dim must be 1 or 2");
  if (cutoff < 1) throw DomainError("HermiteTransform: cutoff must be >= 1");
  if (rule_.order < cutoff)
    throw DomainError("HermiteTransform: rule order " + std::to_string(rule_.order) + " cannot resolve " +
                      std::to_string(cutoff) + " modes");
  const int q = rule_.order;
  synth_.resize(static_cast<std::size_t>(q) * cutoff);
  analysis_.resize(synth_.size());
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < q; ++i) {
    hermite_functions(cutoff, rule_.nodes[i], synth_.data() + static_cast<std::size_t>(i) * cutoff);
    for (int n = 0; n < cutoff; ++n)
      analysis_[static_cast<std::size_t>(n) * q + i] =
          rule_.scaled_weights[i] * synth_[static_cast<std::size_t>(i) * cutoff + n] * inv_sqrt_pi;
  }
}

std::size_t HermiteTransform::grid_size() const {
  const std::size_t q = rule_.order;
  return dim_ == 1 ? q : q * q;
}

std::size_t HermiteTransform::coeff_size() const {
  const std::size_t m = cutoff_;
  return dim_ == 1 ? m : m * m;
}

void HermiteTransform::synthesize_into(const cplx* coeffs, cplx* grid) const {
  const auto& k = kernels::active();
  const std::size_t q = rule_.order, m = cutoff_;
  if (dim_ == 1) {
    k.gemv(synth_.data(), q, m, coeffs, grid);
    return;
  }
  // P = C S^T (m x q), then grid = S P
  std::vector<cplx> p(m * q);
  for (std::size_t j = 0; j < m; ++j) k.gemv(synth_.data(), q, m, coeffs + j * m, p.data() + j * q);
  for (std::size_t i = 0; i < q; ++i) {
    cplx* row = grid + i * q;
    std::fill(row, row + q, cplx{});
    const double* s = synth_.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) k.axpy(s[j], p.data() + j * q, row, q);
  }
}

void HermiteTransform::analyze_into(const cplx* grid, cplx* coeffs) const {
  const auto& k = kernels::active();
  const std::size_t q = rule_.order, m = cutoff_;
  if (dim_ == 1) {
    k.gemv(analysis_.data(), m, q, grid, coeffs);
    return;
  }
  // P = G A^T (q x m), then C = A P
  std::vector<cplx> p(q * m);
  for (std::size_t i = 0; i < q; ++i) k.gemv(analysis_.data(), m, q, grid + i * q, p.data() + i * m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx* row = coeffs + j * m;
    std::fill(row, row + m, cplx{});
    const double* a = analysis_.data() + j * q;
    for (std::size_t i = 0; i < q; ++i) k.axpy(a[i], p.data() + i * m, row, m);
  }
}

GridField HermiteTransform::synthesize(const SpectralState& state) const {
  if (state.dim() != dim_ || state.cutoff() != cutoff_) throw DomainError("synthesize: state shape mismatch");
  GridField g{dim_, rule_.order, std::vector<cplx>(grid_size())};
  synthesize_into(state.data(), g.values.data());
  return g;
}

SpectralState HermiteTransform::analyze(const GridField& field) const {
  if (field.dim != dim_ || field.order != rule_.order || field.values.size() != grid_size())
    throw DomainError("analyze: grid does not match the quadrature rule");
  SpectralState s(dim_, cutoff_);
  analyze_into(field.values.data(), s.data());
  return s;
}

SpectralState analyze(const GridField& samples, const QuadratureRule& rule, int cutoff) {
  return HermiteTransform(samples.dim, cutoff, rule).analyze(samples);
}

GridField synthesize(const SpectralState& state, const QuadratureRule& rule) {
  return HermiteTransform(state.dim(), state.cutoff(), rule).synthesize(state);
}

cplx evaluate(const SpectralState& state, double y1, double y2) {
  const int m = state.cutoff();
  const std::vector<double> h1 = hermite_functions(m, y1);
  if (state.dim() == 1) {
    cplx s{};
    for (int n = 0; n < m; ++n) s += state[n] * h1[n];
    return s;
  }
  const std::vector<double> h2 = hermite_functions(m, y2);
  cplx s{};
  for (int j = 0; j < m; ++j) {
    cplx row{};
    for (int k = 0; k < m; ++k) row += state[static_cast<std::size_t>(j) * m + k] * h2[k];
    s += h1[j] * row;
  }
  return s;
}

}  // namespace strichartz
