#include "kernels_internal.hpp"

namespace strichartz::kernels::detail {
namespace {

void gemv(const double* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    double re = 0.0, im = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      re += row[c] * x[c].real();
      im += row[c] * x[c].imag();
    }
    y[r] = {re, im};
  }
}

void axpy(double s, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void cmul(cplx* x, const cplx* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real() * p[i].real() - x[i].imag() * p[i].imag();
    const double im = x[i].real() * p[i].imag() + x[i].imag() * p[i].real();
    x[i] = {re, im};
  }
}

void abs2(const cplx* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

double weighted_power_sum(const double* w, const cplx* x, std::size_t n, int k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    double v = m;
    for (int e = 1; e < k; ++e) v *= m;
    sum += w[i] * v;
  }
  return sum;
}

double dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

const Table& scalar_impl() {
  static const Table table{Isa::scalar, gemv, axpy, cmul, abs2, weighted_power_sum, dot};
  return table;
}

}  // namespace strichartz::kernels::detail
