// Data-parallel inner loops shared by the transforms, the solver and the
// quadrature sums. Every kernel has a scalar reference implementation; an
// AVX2/FMA variant is chosen at runtime when the CPU supports it.
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace strichartz::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  // y[r] = sum_c a[r * cols + c] * x[c]   (real row-major matrix, complex vector)
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
  // y[i] += s * x[i]
  void (*axpy)(double s, const cplx* x, cplx* y, std::size_t n);
  // x[i] *= p[i]
  void (*cmul)(cplx* x, const cplx* p, std::size_t n);
  // out[i] = |x[i]|^2
  void (*abs2)(const cplx* x, double* out, std::size_t n);
  // sum_i w[i] * |x[i]|^(2k) for integer k >= 1
  double (*weighted_power_sum)(const double* w, const cplx* x, std::size_t n, int k);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const Table& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks the instructions.
const Table* avx2_table();

const Table& active();
void select(Isa isa);
std::string_view name(Isa isa);

}  // namespace strichartz::kernels
