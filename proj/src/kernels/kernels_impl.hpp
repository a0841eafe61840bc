#pragma once

#include <cstddef>

#include "seqspec/kernels.hpp"

namespace seqspec::kernels {

// Plain complex product without the NaN/Inf recovery path of operator*.
inline Complex cmul(Complex a, Complex b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

namespace scalar {
void gemm(std::size_t n, const Complex* a, const Complex* b, Complex* c);
void gemv(std::size_t n, const Complex* a, const Complex* x, Complex* y);
void axpy(std::size_t n, Complex alpha, const Complex* x, Complex* y);
void rotated_sum(const Complex* values, std::size_t count, std::size_t dim, Complex step, Complex* acc);
}  // namespace scalar

namespace avx2 {
void gemm(std::size_t n, const Complex* a, const Complex* b, Complex* c);
void gemv(std::size_t n, const Complex* a, const Complex* x, Complex* y);
void axpy(std::size_t n, Complex alpha, const Complex* x, Complex* y);
void rotated_sum(const Complex* values, std::size_t count, std::size_t dim, Complex step, Complex* acc);
}  // namespace avx2

}  // namespace seqspec::kernels
