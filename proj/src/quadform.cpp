#include "strichartz/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "strichartz/constants.hpp"
#include "strichartz/errors.hpp"
#include "strichartz/gaussian.hpp"
#include "strichartz/kernels.hpp"

namespace strichartz {
namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2, got " + std::to_string(dim));
}

// Q = mass * ||phi||^2 + rank_one * (Re \int G_0 phi)^2
//     - modulus * \iint G_0^{4/N} |e^{-i tau H/2} phi|^2
//     - square * Re \iint G_0^{4/N} e^{i N tau} (e^{-i tau H/2} phi)^2
struct FormCoefficients {
  double mass;
  double rank_one;
  double modulus;
  double square;
};

FormCoefficients form_coefficients(int dim) {
  const double n = dim;
  const double cs = strichartz_constant(dim);
  return {cs * (n + 2) / n, cs * 4 * (n + 2) / (n * n), (n + 2) * (n + 2) / (n * n), 2 * (n + 2) / (n * n)};
}

// G_0^{4/N} = pi^{-1} e^{-(2/N)|y|^2}
double weight_exponent(int dim) { return 2.0 / dim; }

std::vector<double> tensor_weights(int dim, const std::vector<double>& w) {
  if (dim == 1) return w;
  const std::size_t q = w.size();
  std::vector<double> out(q * q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t l = 0; l < q; ++l) out[i * q + l] = w[i] * w[l];
  return out;
}

std::string basis_label(int dim, const EigenIndex& idx, bool imaginary) {
  std::string s = imaginary ? "i*h_" : "h_";
  if (dim == 1) return s + std::to_string(idx.j);
  return s + "(" + std::to_string(idx.j) + "," + std::to_string(idx.k) + ")";
}

}  // namespace

double time_phase_integral(int m) {
  if (m == 0) return kPi;
  if (m % 2 == 0) return 0.0;
  const double sine = (((m % 4) + 4) % 4 == 1) ? 1.0 : -1.0;
  return 2.0 * sine / m;
}

OverlapTable::OverlapTable(double a, int cutoff) : cutoff_(cutoff), table_(static_cast<std::size_t>(cutoff) * cutoff) {
  if (cutoff < 1) throw DomainError("OverlapTable: cutoff must be >= 1");
  const QuadratureRule rule = gaussian_scaled_rule(cutoff + 8, 1.0 + a);
  const int q = rule.order;
  std::vector<double> h(static_cast<std::size_t>(q) * cutoff);
  std::vector<double> weight(q);
  for (int i = 0; i < q; ++i) {
    hermite_functions(cutoff, rule.nodes[i], h.data() + static_cast<std::size_t>(i) * cutoff);
    weight[i] = rule.scaled_weights[i] * std::exp(-a * rule.nodes[i] * rule.nodes[i]);
  }
  for (int j = 0; j < cutoff; ++j) {
    for (int k = j; k < cutoff; k += 2) {
      double s = 0.0;
      for (int i = 0; i < q; ++i) {
        const double* row = h.data() + static_cast<std::size_t>(i) * cutoff;
        s += weight[i] * row[j] * row[k];
      }
      table_[static_cast<std::size_t>(j) * cutoff + k] = s;
      table_[static_cast<std::size_t>(k) * cutoff + j] = s;
    }
  }
}

double overlap_integral(double a, const EigenIndex& j, const EigenIndex& k) {
  if (j.dim != k.dim) throw DomainError("overlap_integral: index dimensions differ");
  if (!(a > -1.0)) throw DomainError("overlap_integral: need a > -1 for convergence");
  auto one = [a](int m, int n) {
    if ((m + n) % 2 != 0) return 0.0;
    const QuadratureRule rule = gaussian_scaled_rule((m + n) / 2 + 9, 1.0 + a);
    double s = 0.0;
    for (int i = 0; i < rule.order; ++i)
      s += rule.scaled_weights[i] * std::exp(-a * rule.nodes[i] * rule.nodes[i]) * hermite_function(m, rule.nodes[i]) *
           hermite_function(n, rule.nodes[i]);
    return s;
  };
  if (j.dim == 1) return one(j.j, k.j);
  return one(j.j, k.j) * one(j.k, k.k);
}

double q_eval(const SpectralState& phi) {
  const int dim = phi.dim();
  const int m = phi.cutoff();
  const FormCoefficients fc = form_coefficients(dim);

  // Oscillator components phi_l (sum over indices of level l) on a grid that
  // integrates e^{-(2/N)|y|^2} phi_l phi_l' exactly.
  const QuadratureRule rule = gaussian_scaled_rule(m + 8, 1.0 + weight_exponent(dim));
  const int q = rule.order;
  const std::size_t g = dim == 1 ? q : static_cast<std::size_t>(q) * q;
  const int levels = dim * (m - 1) + 1;
  std::vector<double> h(static_cast<std::size_t>(q) * m);
  for (int i = 0; i < q; ++i) hermite_functions(m, rule.nodes[i], h.data() + static_cast<std::size_t>(i) * m);

  std::vector<std::vector<cplx>> comp(levels);
  for (std::size_t f = 0; f < phi.size(); ++f) {
    const cplx c = phi[f];
    if (c == cplx{}) continue;
    const EigenIndex idx = phi.index_of(f);
    auto& field = comp[idx.level()];
    if (field.empty()) field.assign(g, cplx{});
    if (dim == 1) {
      for (int i = 0; i < q; ++i) field[i] += c * h[static_cast<std::size_t>(i) * m + idx.j];
    } else {
      for (int i = 0; i < q; ++i) {
        const cplx ci = c * h[static_cast<std::size_t>(i) * m + idx.j];
        for (int l = 0; l < q; ++l) field[static_cast<std::size_t>(i) * q + l] += ci * h[static_cast<std::size_t>(l) * m + idx.k];
      }
    }
  }
  std::vector<double> w1(q);
  for (int i = 0; i < q; ++i)
    w1[i] = rule.scaled_weights[i] * std::exp(-weight_exponent(dim) * rule.nodes[i] * rule.nodes[i]);
  const std::vector<double> w = tensor_weights(dim, w1);

  double modulus_term = 0.0;
  double square_term = 0.0;
  for (int a = 0; a < levels; ++a) {
    if (comp[a].empty()) continue;
    for (int b = 0; b < levels; ++b) {
      if (comp[b].empty()) continue;
      const double t_mod = time_phase_integral(b - a);
      const double t_sq = time_phase_integral(-(a + b));
      if (t_mod == 0.0 && t_sq == 0.0) continue;
      cplx s_mod{}, s_sq{};
      for (std::size_t i = 0; i < g; ++i) {
        s_mod += w[i] * comp[a][i] * std::conj(comp[b][i]);
        s_sq += w[i] * comp[a][i] * comp[b][i];
      }
      modulus_term += t_mod * s_mod.real() / kPi;
      square_term += t_sq * s_sq.real() / kPi;
    }
  }

  // Re \int G_0 phi on a standard Gauss-Hermite grid (exact for band-limited phi)
  const QuadratureRule& std_rule = cached_gauss_hermite_rule(m + 8);
  const GridField values = synthesize(phi, std_rule);
  const GridField g0 = sample_grid(dim, std_rule, [dim](double y1, double y2) {
    return lens_gaussian(dim, 0.0, {y1, y2});
  });
  GridField prod = values;
  for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] *= g0.values[i];
  const double pairing = integrate_grid(prod, std_rule).real();

  return fc.mass * phi.mass() + fc.rank_one * pairing * pairing - fc.modulus * modulus_term - fc.square * square_term;
}

double q_diag_1d(int j) {
  if (j < 1) throw DomainError("q_diag_1d: j must be >= 1 (the h_0 sector goes through q_eval)");
  const FormCoefficients fc = form_coefficients(1);
  const double sqrt_pi = std::sqrt(kPi);
  return fc.mass * sqrt_pi - fc.modulus * overlap_integral(2.0, EigenIndex::of(j), EigenIndex::of(j));
}

double q_diag_2d(int j, int k) {
  if (j < 0 || k < 0 || j + k < 1) throw DomainError("q_diag_2d: need j, k >= 0 and j + k >= 1");
  const double log_ratio = log_factorial(2 * j) + log_factorial(2 * k) - (2.0 * (j + k) - 1.0) * std::numbers::ln2 -
                           2.0 * log_factorial(j) - 2.0 * log_factorial(k);
  return kPi * (1.0 - std::exp(log_ratio));
}

double q_level2_2d(cplx a, cplx b, cplx c) { return kPi * (0.25 * std::norm(a - b) + 0.5 * std::norm(c)); }

double g_func(int j, int k) {
  if (j < 0 || k < 0) throw DomainError("g_func: negative index");
  if ((j + k) % 2 != 0) return 0.0;
  const int s = j + k;
  const double log_value = log_factorial(s) - (s - 0.5) * std::numbers::ln2 - 0.5 * (log_factorial(j) + log_factorial(k)) -
                           log_factorial(s / 2);
  return std::exp(log_value);
}

double f_func(int m, int j, int k) {
  if (j < 0 || k < 0 || j > m || k > m) throw DomainError("f_func: need 0 <= j, k <= m");
  return g_func(j, k) * g_func(m - j, m - k);
}

double f_script(int m, int j) {
  if (j < 0 || j > m) throw DomainError("f_script: need 0 <= j <= m");
  double s = 0.0;
  for (int k = (j % 2); k <= m; k += 2) s += f_func(m, j, k);
  return s;
}

TailBound tail_bound(int dim, int index) {
  check_dim(dim);
  if (dim == 1) {
    if (index < 0) throw DomainError("tail_bound: index must be >= 0");
    const double v =
        std::sqrt(3.0 * kPi) * (1.0 - 3.0 * std::sqrt(3.0) / (std::sqrt(2.0) * std::sqrt(3.0 * index + 1.0)));
    return {v, v > 0.0};
  }
  if (index < 1) throw DomainError("tail_bound: level must be >= 1");
  const double m = index;
  const double first = 1.0 / std::sqrt(3 * m + 4) + 1.0 / (2.0 * std::sqrt(3 * m + 1));
  const double even = (index % 2 == 0) ? 1.0 / std::sqrt(1.5 * m + 1) : 0.0;
  const double second = ((2.0 * std::sqrt(3 * m + 1) + 1.0) / 3.0 + even) / std::sqrt(3 * m + 2);
  const double v = 2.0 * std::sqrt(first * second);
  return {v, v < 1.0};
}

int tail_index(int dim) {
  constexpr int horizon = 10000;
  int first = horizon + 1;
  for (int i = horizon; i >= (dim == 1 ? 0 : 1); --i) {
    if (!tail_bound(dim, i).certifies) break;
    first = i;
  }
  return first;
}

Eigen::VectorXd to_real_vector(const SpectralState& state) {
  const Eigen::Index k = static_cast<Eigen::Index>(state.size());
  Eigen::VectorXd v(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    v[i] = state[i].real();
    v[k + i] = state[i].imag();
  }
  return v;
}

SpectralState from_real_vector(int dim, int cutoff, const Eigen::VectorXd& v) {
  SpectralState s(dim, cutoff);
  const Eigen::Index k = static_cast<Eigen::Index>(s.size());
  if (v.size() != 2 * k) throw DomainError("from_real_vector: size mismatch");
  for (Eigen::Index i = 0; i < k; ++i) s[i] = {v[i], v[k + i]};
  return s;
}

std::vector<KernelDirection> kernel_directions(int dim, int cutoff) {
  check_dim(dim);
  const QuadratureRule& rule = cached_gauss_hermite_rule(default_quadrature_order(cutoff));
  const HermiteTransform transform(dim, cutoff, rule);
  auto make = [&](const std::string& name, auto weight) {
    SpectralState s = transform.analyze(sample_grid(dim, rule, [&](double y1, double y2) {
      return weight(y1, y2) * lens_gaussian(dim, 0.0, {y1, y2});
    }));
    s *= 1.0 / std::sqrt(s.mass());
    return KernelDirection{name, s};
  };
  std::vector<KernelDirection> base;
  base.push_back(make("G0", [](double, double) { return 1.0; }));
  base.push_back(make("x1*G0", [](double y1, double) { return y1; }));
  if (dim == 2) base.push_back(make("x2*G0", [](double, double y2) { return y2; }));
  base.push_back(make("|x|^2*G0", [dim](double y1, double y2) { return y1 * y1 + (dim == 2 ? y2 * y2 : 0.0); }));
  std::vector<KernelDirection> out;
  for (const auto& d : base) {
    out.push_back(d);
    out.push_back({"i*" + d.name, cplx{0.0, 1.0} * d.state});
  }
  return out;
}

double QuadFormMatrix::cross_level_max() const {
  const Eigen::Index k = entries.rows() / 2;
  std::vector<int> level(k);
  SpectralState shape(dim, cutoff);
  for (Eigen::Index i = 0; i < k; ++i) level[i] = shape.index_of(i).level();
  double worst = 0.0;
  for (Eigen::Index a = 0; a < entries.rows(); ++a) {
    const Eigen::Index fa = a % k;
    if (fa == 0) continue;
    for (Eigen::Index b = 0; b < entries.cols(); ++b) {
      const Eigen::Index fb = b % k;
      if (fb == 0 || level[fa] == level[fb]) continue;
      worst = std::max(worst, std::abs(entries(a, b)));
    }
  }
  return worst;
}

QuadFormMatrix gram_matrix(int dim, int cutoff) {
  check_dim(dim);
  if (cutoff < 4) throw DomainError("gram_matrix: cutoff must be >= 4");
  const FormCoefficients fc = form_coefficients(dim);
  const OverlapTable overlaps(weight_exponent(dim), cutoff);
  SpectralState shape(dim, cutoff);
  const Eigen::Index k = static_cast<Eigen::Index>(shape.size());
  std::vector<EigenIndex> idx(k);
  for (Eigen::Index i = 0; i < k; ++i) idx[i] = shape.index_of(i);

  QuadFormMatrix out;
  out.dim = dim;
  out.cutoff = cutoff;
  out.entries = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      const double o = (dim == 1 ? overlaps(idx[a].j, idx[b].j)
                                 : overlaps(idx[a].j, idx[b].j) * overlaps(idx[a].k, idx[b].k)) / kPi;
      if (o == 0.0) continue;
      const int la = idx[a].level(), lb = idx[b].level();
      const double t_mod = time_phase_integral(lb - la);
      const double t_sq = time_phase_integral(-(la + lb));
      const double xx = -fc.modulus * o * t_mod - fc.square * o * t_sq;
      const double yy = -fc.modulus * o * t_mod + fc.square * o * t_sq;
      out.entries(a, b) += xx;
      out.entries(k + a, k + b) += yy;
      if (a != b) {
        out.entries(b, a) += xx;
        out.entries(k + b, k + a) += yy;
      }
    }
  }
  const double norm2 = shape.basis_norm2();
  for (Eigen::Index i = 0; i < 2 * k; ++i) out.entries(i, i) += fc.mass * norm2;
  out.entries(0, 0) += fc.rank_one * norm2;

  for (const auto& d : kernel_directions(dim, cutoff)) out.kernel_basis.push_back(to_real_vector(d.state));
  // Orthonormalize (modified Gram-Schmidt, two passes), dropping round-off noise first
  for (auto& v : out.kernel_basis) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) < 1e-14 * scale) v[i] = 0.0;
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < out.kernel_basis.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) out.kernel_basis[i] -= out.kernel_basis[j].dot(out.kernel_basis[i]) * out.kernel_basis[j];
      out.kernel_basis[i].normalize();
    }
  }

  // Cross-check against the level-wise grid evaluation of Q
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd v(2 * k);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uni(rng);
    const double matrix_value = out.value(v);
    const double direct = q_eval(from_real_vector(dim, cutoff, v));
    const double scale = v.squaredNorm() * out.entries.diagonal().cwiseAbs().maxCoeff();
    out.self_consistency_error = std::max(out.self_consistency_error, std::abs(matrix_value - direct) / scale);
  }
  if (out.self_consistency_error > 1e-9)
    throw NumericalError("gram_matrix: matrix and direct evaluation of Q disagree (relative " +
                         std::to_string(out.self_consistency_error) + "); quadrature under-resolved");
  return out;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

}  // namespace

CoercivityReport coercivity_certificate(int dim, int cutoff) {
  check_dim(dim);
  if (cutoff < 8) throw DomainError("coercivity_certificate: cutoff must be >= 8");
  const QuadFormMatrix qm = gram_matrix(dim, cutoff);
  const Eigen::MatrixXd& mat = qm.entries;
  const int n = static_cast<int>(mat.rows());
  const int kdim = n / 2;
  const double norm2 = SpectralState(dim, cutoff).basis_norm2();

  CoercivityReport rep;
  rep.dim = dim;
  rep.cutoff = cutoff;
  rep.matrix_norm = mat.cwiseAbs().maxCoeff();
  rep.symmetry_error = (mat - mat.transpose()).cwiseAbs().maxCoeff();
  rep.cross_level_max = qm.cross_level_max();

  for (const auto& d : kernel_directions(dim, cutoff)) {
    rep.kernel_names.push_back(d.name);
    rep.kernel_residuals.push_back(std::abs(q_eval(d.state)));
  }

  // Independent blocks: indices coupled by the matrix or by a common symmetry direction
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const double zero = 1e-14 * rep.matrix_norm;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(mat(a, b)) > zero) unite(parent, a, b);
  for (const auto& v : qm.kernel_basis) {
    int first = -1;
    for (int i = 0; i < n; ++i) {
      if (v[i] == 0.0) continue;
      if (first < 0) first = i;
      else unite(parent, first, i);
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    if (block_of[r] < 0) {
      block_of[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[block_of[r]].push_back(i);
  }
  rep.blocks = static_cast<int>(blocks.size());

  rep.c_min = std::numeric_limits<double>::infinity();
  rep.psd_min_eigenvalue = std::numeric_limits<double>::infinity();
  SpectralState shape(dim, cutoff);
  for (const auto& block : blocks) {
    const int bs = static_cast<int>(block.size());
    Eigen::MatrixXd sub(bs, bs);
    for (int a = 0; a < bs; ++a)
      for (int b = 0; b < bs; ++b) sub(a, b) = mat(block[a], block[b]) / norm2;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(sub, Eigen::EigenvaluesOnly);
    if (full.info() != Eigen::Success) throw NumericalError("coercivity_certificate: eigensolver failed");
    rep.psd_min_eigenvalue = std::min(rep.psd_min_eigenvalue, full.eigenvalues()[0] * norm2);

    std::vector<Eigen::VectorXd> local_kernel;
    const int root = find_root(parent, block[0]);
    for (const auto& v : qm.kernel_basis) {
      int support = -1;
      for (int i = 0; i < n && support < 0; ++i)
        if (v[i] != 0.0) support = i;
      if (support < 0 || find_root(parent, support) != root) continue;
      Eigen::VectorXd lv(bs);
      for (int a = 0; a < bs; ++a) lv[a] = v[block[a]];
      local_kernel.push_back(lv);
    }
    const int kk = static_cast<int>(local_kernel.size());
    if (kk >= bs) continue;
    Eigen::MatrixXd basis;  // orthonormal basis of the complement of the symmetry directions
    if (kk == 0) {
      basis = Eigen::MatrixXd::Identity(bs, bs);
    } else {
      Eigen::MatrixXd kmat(bs, kk);
      for (int c = 0; c < kk; ++c) kmat.col(c) = local_kernel[c];
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(kmat);
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(bs, bs);
      basis = q.rightCols(bs - kk);
    }
    const Eigen::MatrixXd projected = basis.transpose() * sub * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected);
    if (es.info() != Eigen::Success) throw NumericalError("coercivity_certificate: eigensolver failed");
    if (es.eigenvalues()[0] < rep.c_min) {
      rep.c_min = es.eigenvalues()[0];
      const Eigen::VectorXd dir = basis * es.eigenvectors().col(0);
      Eigen::Index arg = 0;
      dir.cwiseAbs().maxCoeff(&arg);
      const int global = block[arg];
      rep.minimizer = basis_label(dim, shape.index_of(global % kdim), global >= kdim);
    }
  }

  rep.tail_index = tail_index(dim);
  rep.tail_lower_bound = std::numeric_limits<double>::infinity();
  for (int i = cutoff; i <= cutoff + 2000; ++i) {
    const TailBound tb = tail_bound(dim, i);
    const double normalized = dim == 1 ? tb.value / std::sqrt(kPi) : 1.0 - tb.value;
    rep.tail_lower_bound = std::min(rep.tail_lower_bound, normalized);
  }

  const double kernel_worst = *std::max_element(rep.kernel_residuals.begin(), rep.kernel_residuals.end());
  rep.valid = rep.c_min > 0.0 && kernel_worst <= 1e-8 && rep.tail_lower_bound > 0.0 && cutoff >= rep.tail_index &&
              rep.psd_min_eigenvalue >= -1e-8 * rep.matrix_norm;
  return rep;
}

double linear_spacetime_norm(const SpectralState& u, const DeficitOptions& options) {
  const int dim = u.dim();
  const int m = u.cutoff();
  const int half_power = dim == 1 ? 3 : 2;  // p/2 with p = 2 + 4/N
  const int order = std::max(m, half_power * (m - 1) + 2);
  const QuadratureRule rule = gaussian_scaled_rule(order, half_power);
  const HermiteTransform transform(dim, m, rule);
  const std::vector<double> w = tensor_weights(dim, rule.scaled_weights);
  const NodesWeights taus = composite_gauss_legendre(-kPi / 2, kPi / 2, options.tau_panels, options.tau_nodes);
  const auto& k = kernels::active();
  std::vector<cplx> grid(transform.grid_size());
  double total = 0.0;
  for (std::size_t t = 0; t < taus.nodes.size(); ++t) {
    const SpectralState v = harmonic_propagate(u, taus.nodes[t]);
    transform.synthesize_into(v.data(), grid.data());
    total += taus.weights[t] * k.weighted_power_sum(w.data(), grid.data(), grid.size(), half_power);
  }
  return total;
}

double strichartz_deficit(const SpectralState& phi, double eps, const DeficitOptions& options) {
  const int dim = phi.dim();
  SpectralState u = gaussian_datum(dim, phi.cutoff());
  u += cplx(eps) * phi;
  const double cs = strichartz_constant(dim);
  return cs * std::pow(u.mass(), 1.0 + 2.0 / dim) - linear_spacetime_norm(u, options);
}

}  // namespace strichartz
