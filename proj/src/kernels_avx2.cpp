#include <immintrin.h>

#include "kernels_internal.hpp"

namespace strichartz::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (a0, a1) -> (a0, a0, a1, a1), matching two interleaved complex numbers
inline __m256d spread_pair(const double* a) {
  return _mm256_permute_pd(_mm256_broadcast_pd(reinterpret_cast<const __m128d*>(a)), 0b1100);
}

// |z|^2 for four interleaved complex numbers starting at xd
inline __m256d abs2_quad(const double* xd) {
  const __m256d lo = _mm256_loadu_pd(xd);
  const __m256d hi = _mm256_loadu_pd(xd + 4);
  const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(lo, lo), _mm256_mul_pd(hi, hi));
  return _mm256_permute4x64_pd(h, 0xD8);
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      acc0 = _mm256_fmadd_pd(spread_pair(row + c), _mm256_loadu_pd(xd + 2 * c), acc0);
      acc1 = _mm256_fmadd_pd(spread_pair(row + c + 2), _mm256_loadu_pd(xd + 2 * c + 4), acc1);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double re = _mm_cvtsd_f64(s);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; c < cols; ++c) {
      re += row[c] * x[c].real();
      im += row[c] * x[c].imag();
    }
    y[r] = {re, im};
  }
}

void axpy(double s, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t len = 2 * n;
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
    _mm256_storeu_pd(yd + i + 4,
                     _mm256_fmadd_pd(sv, _mm256_loadu_pd(xd + i + 4), _mm256_loadu_pd(yd + i + 4)));
  }
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
  for (; i < len; ++i) yd[i] += s * xd[i];
}

void cmul(cplx* x, const cplx* p, std::size_t n) {
  double* xd = reinterpret_cast<double*>(x);
  const double* pd = reinterpret_cast<const double*>(p);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d pv = _mm256_loadu_pd(pd + 2 * i);
    const __m256d pre = _mm256_movedup_pd(pv);
    const __m256d pim = _mm256_permute_pd(pv, 0xF);
    const __m256d swapped = _mm256_permute_pd(xv, 0x5);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(xv, pre, _mm256_mul_pd(swapped, pim)));
  }
  for (; i < n; ++i) {
    const double re = x[i].real() * p[i].real() - x[i].imag() * p[i].imag();
    const double im = x[i].real() * p[i].imag() + x[i].imag() * p[i].real();
    x[i] = {re, im};
  }
}

void abs2(const cplx* x, double* out, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, abs2_quad(xd + 2 * i));
  for (; i < n; ++i) out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

double weighted_power_sum(const double* w, const cplx* x, std::size_t n, int k) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = abs2_quad(xd + 2 * i);
    __m256d v = m;
    for (int e = 1; e < k; ++e) v = _mm256_mul_pd(v, m);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), v, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double m = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    double v = m;
    for (int e = 1; e < k; ++e) v *= m;
    sum += w[i] * v;
  }
  return sum;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

const Table& avx2_impl() {
  static const Table table{Isa::avx2, gemv, axpy, cmul, abs2, weighted_power_sum, dot};
  return table;
}

}  // namespace strichartz::kernels::detail
