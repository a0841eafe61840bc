#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "seqspec/linalg.hpp"
#include "seqspec/types.hpp"

namespace seqspec::testing {

inline double max_entry_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline double vec_diff(const CVector& a, const CVector& b) { return (a - b).norm(); }

inline CVector gaussian_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dim);
  for (auto& z : v) z = {g(rng), g(rng)};
  return CVector(std::move(v));
}

inline CMatrix gaussian_matrix(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(dim * dim);
  for (auto& z : v) z = {g(rng), g(rng)};
  return CMatrix(dim, std::move(v));
}

// Product of `count` Householder reflectors I - 2 w w^H.
inline CMatrix householder_unitary(std::mt19937_64& rng, std::size_t dim, std::size_t count = 3) {
  CMatrix u = CMatrix::identity(dim);
  for (std::size_t k = 0; k < count; ++k) {
    CVector w = gaussian_vector(rng, dim);
    w *= 1.0 / w.norm();
    CMatrix h = CMatrix::identity(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) h(r, c) -= 2.0 * w[r] * std::conj(w[c]);
    u = mat_mul(h, u);
  }
  return u;
}

// Hausdorff-style matching distance between two multisets of equal size:
// greedy nearest pairing, which is exact for well-separated points.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const Complex z : a) {
    auto it = std::min_element(b.begin(), b.end(), [z](Complex x, Complex y) { return std::abs(x - z) < std::abs(y - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

}  // namespace seqspec::testing
