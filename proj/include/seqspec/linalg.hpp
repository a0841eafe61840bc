#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seqspec/types.hpp"

namespace seqspec {

inline constexpr std::uint64_t kDefaultNormSeed = 0x9e3779b97f4a7c15ULL;

/// Pivots smaller than this fraction of the largest entry are treated as zero.
inline constexpr double kPivotRelTol = 1e-14;

CMatrix mat_mul(const CMatrix& a, const CMatrix& b);
CVector mat_vec(const CMatrix& a, const CVector& x);

/// Solves a * X = rhs by row-pivoted elimination. Throws SingularMatrixError.
CMatrix mat_solve(const CMatrix& a, const CMatrix& rhs);
CVector mat_solve(const CMatrix& a, const CVector& rhs);
CMatrix inverse(const CMatrix& a);

/// Spectral norm (largest singular value) by power iteration on the Gram
/// matrix A^H A started from a vector drawn from `seed`. Stops when the
/// relative Rayleigh-quotient change drops below 1e-12; throws
/// NumericalFailure after 1000 iterations. When the plain iteration stalls the
/// iteration matrix is squared every 50 steps, which leaves the Rayleigh
/// quotient (always taken against the Gram matrix itself) unchanged.
double operator_norm(const CMatrix& a, std::uint64_t seed = kDefaultNormSeed);

/// operator_norm(a - b)
double distance(const CMatrix& a, const CMatrix& b);

/// ||U^H U - I||
double unitarity_defect(const CMatrix& u);

struct PowerNorm {
  std::size_t n;
  LogMagnitude log_norm;  // ln ||A^n||, zero-tagged when A^n vanishes exactly
  double norm() const noexcept { return log_norm.value(); }
};

/// ln||A^n|| for n = 1..n_max. Powers are carried as P_n = A^n / exp(s_n) and
/// rescaled whenever ||P_n|| leaves [1e-100, 1e100].
std::vector<PowerNorm> mat_power_seq(const CMatrix& a, std::size_t n_max);

}  // namespace seqspec
