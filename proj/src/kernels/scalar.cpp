#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace seqspec::kernels::scalar {

void gemm(std::size_t n, const Complex* a, const Complex* b, Complex* c) {
  std::fill(c, c + n * n, Complex{});
  for (std::size_t i = 0; i < n; ++i) {
    Complex* c_row = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      const Complex* b_row = b + k * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += cmul(aik, b_row[j]);
    }
  }
}

void gemv(std::size_t n, const Complex* a, const Complex* x, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum{};
    const Complex* row = a + i * n;
    for (std::size_t j = 0; j < n; ++j) sum += cmul(row[j], x[j]);
    y[i] = sum;
  }
}

void axpy(std::size_t n, Complex alpha, const Complex* x, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += cmul(alpha, x[i]);
}

void rotated_sum(const Complex* values, std::size_t count, std::size_t dim, Complex step,
                 Complex* acc) {
  Complex phase{1.0, 0.0};
  for (std::size_t i = 0; i < count; ++i) {
    const Complex* row = values + i * dim;
    for (std::size_t k = 0; k < dim; ++k) acc[k] += cmul(phase, row[k]);
    phase = cmul(phase, step);
    if ((i + 1) % kRenormInterval == 0) phase /= std::abs(phase);
  }
}

}  // namespace seqspec::kernels::scalar
