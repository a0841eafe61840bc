// Compiled with -mavx2 -mfma. Nothing here may run before dispatch has
// confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace seqspec::kernels::avx2 {
namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// Lane-wise complex product a * b.
inline __m256d mul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

// x * s with s broadcast as separate real/imag registers.
inline __m256d mul2_scalar(__m256d x, __m256d s_re, __m256d s_im) {
  const __m256d x_swap = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, s_re, _mm256_mul_pd(x_swap, s_im));
}

inline Complex hsum2(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

}  // namespace

void gemm(std::size_t n, const Complex* a, const Complex* b, Complex* c) {
  std::fill(c, c + n * n, Complex{});
  const std::size_t pairs = n / 2 * 2;
  for (std::size_t i = 0; i < n; ++i) {
    Complex* c_row = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      const __m256d s_re = _mm256_set1_pd(aik.real());
      const __m256d s_im = _mm256_set1_pd(aik.imag());
      const Complex* b_row = b + k * n;
      std::size_t j = 0;
      for (; j < pairs; j += 2) {
        const __m256d prod = mul2_scalar(load2(b_row + j), s_re, s_im);
        store2(c_row + j, _mm256_add_pd(load2(c_row + j), prod));
      }
      for (; j < n; ++j) c_row[j] += cmul(aik, b_row[j]);
    }
  }
}

void gemv(std::size_t n, const Complex* a, const Complex* x, Complex* y) {
  const std::size_t pairs = n / 2 * 2;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex* row = a + i * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j < pairs; j += 2) acc = _mm256_add_pd(acc, mul2(load2(row + j), load2(x + j)));
    Complex sum = hsum2(acc);
    for (; j < n; ++j) sum += cmul(row[j], x[j]);
    y[i] = sum;
  }
}

void axpy(std::size_t n, Complex alpha, const Complex* x, Complex* y) {
  const __m256d s_re = _mm256_set1_pd(alpha.real());
  const __m256d s_im = _mm256_set1_pd(alpha.imag());
  const std::size_t pairs = n / 2 * 2;
  std::size_t i = 0;
  for (; i < pairs; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), mul2_scalar(load2(x + i), s_re, s_im)));
  for (; i < n; ++i) y[i] += cmul(alpha, x[i]);
}

void rotated_sum(const Complex* values, std::size_t count, std::size_t dim, Complex step, Complex* acc) {
  if (dim == 1) {
    // Scalar sequence: run two phase streams (even and odd indices) in the two
    // lanes, each advanced by step^2.
    const Complex step2 = cmul(step, step);
    const __m256d s2_re = _mm256_set1_pd(step2.real());
    const __m256d s2_im = _mm256_set1_pd(step2.imag());
    __m256d phase = _mm256_setr_pd(1.0, 0.0, step.real(), step.imag());
    __m256d sum = _mm256_setzero_pd();
    const std::size_t pairs = count / 2 * 2;
    std::size_t i = 0;
    for (; i < pairs; i += 2) {
      sum = _mm256_add_pd(sum, mul2(phase, load2(values + i)));
      phase = mul2_scalar(phase, s2_re, s2_im);
      if ((i + 2) % kRenormInterval == 0) {
        alignas(32) double p[4];
        _mm256_store_pd(p, phase);
        const double m0 = std::hypot(p[0], p[1]);
        const double m1 = std::hypot(p[2], p[3]);
        phase = _mm256_div_pd(phase, _mm256_setr_pd(m0, m0, m1, m1));
      }
    }
    Complex total = hsum2(sum);
    if (i < count) {
      alignas(32) double p[4];
      _mm256_store_pd(p, phase);
      total += cmul({p[0], p[1]}, values[i]);
    }
    acc[0] += total;
    return;
  }

  const std::size_t pairs = dim / 2 * 2;
  Complex phase{1.0, 0.0};
  for (std::size_t i = 0; i < count; ++i) {
    const Complex* row = values + i * dim;
    const __m256d p_re = _mm256_set1_pd(phase.real());
    const __m256d p_im = _mm256_set1_pd(phase.imag());
    std::size_t k = 0;
    for (; k < pairs; k += 2) store2(acc + k, _mm256_add_pd(load2(acc + k), mul2_scalar(load2(row + k), p_re, p_im)));
    for (; k < dim; ++k) acc[k] += cmul(phase, row[k]);
    phase = cmul(phase, step);
    if ((i + 1) % kRenormInterval == 0) phase /= std::abs(phase);
  }
}

}  // namespace seqspec::kernels::avx2
