#include "seqspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "seqspec/errors.hpp"
#include "seqspec/kernels.hpp"

namespace seqspec {
namespace {

constexpr int kNormMaxIterations = 1000;
constexpr int kNormSquareEvery = 50;
constexpr double kNormRelTol = 1e-12;

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) throw PreconditionError(std::string(op) + ": dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

// Row-pivoted LU of `lu` in place; `rhs` holds `cols` right-hand sides stored
// row-major (dim x cols) and is overwritten by the solution.
void lu_solve_in_place(std::size_t n, std::vector<Complex>& lu, std::vector<Complex>& rhs, std::size_t cols,
                       double scale) {
  const auto& k = kernels::active();
  const double threshold = kPivotRelTol * scale;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(lu[r * n + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (!(best > threshold)) {
      throw SingularMatrixError("singular matrix: pivot " + std::to_string(best) + " in column " + std::to_string(col) +
                                    " is below 1e-14 of the largest entry",
                                col, best);
    }
    if (pivot != col) {
      std::swap_ranges(lu.begin() + col * n, lu.begin() + (col + 1) * n, lu.begin() + pivot * n);
      std::swap_ranges(rhs.begin() + col * cols, rhs.begin() + (col + 1) * cols, rhs.begin() + pivot * cols);
    }
    const Complex inv_pivot = 1.0 / lu[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = lu[r * n + col] * inv_pivot;
      if (factor == Complex{}) continue;
      lu[r * n + col] = factor;
      k.axpy(n - col - 1, -factor, &lu[col * n + col + 1], &lu[r * n + col + 1]);
      k.axpy(cols, -factor, &rhs[col * cols], &rhs[r * cols]);
    }
  }
  for (std::size_t row = n; row-- > 0;) {
    for (std::size_t c = row + 1; c < n; ++c) k.axpy(cols, -lu[row * n + c], &rhs[c * cols], &rhs[row * cols]);
    const Complex inv = 1.0 / lu[row * n + row];
    for (std::size_t c = 0; c < cols; ++c) rhs[row * cols + c] *= inv;
  }
}

std::vector<Complex> seeded_start(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double rayleigh(const kernels::KernelTable& k, std::size_t n, const CMatrix& g, const std::vector<Complex>& v,
                std::vector<Complex>& scratch) {
  k.gemv(n, g.data(), v.data(), scratch.data());
  Complex s{};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(v[i]) * scratch[i];
  return s.real();
}

}  // namespace

CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "mat_mul");
  CMatrix c(a.dim());
  kernels::active().gemm(a.dim(), a.data(), b.data(), c.data());
  return c;
}

CVector mat_vec(const CMatrix& a, const CVector& x) {
  require_same_dim(a.dim(), x.dim(), "mat_vec");
  CVector y(a.dim());
  kernels::active().gemv(a.dim(), a.data(), x.data(), y.data());
  return y;
}

CMatrix mat_solve(const CMatrix& a, const CMatrix& rhs) {
  require_same_dim(a.dim(), rhs.dim(), "mat_solve");
  const std::size_t n = a.dim();
  std::vector<Complex> lu(a.entries().begin(), a.entries().end());
  std::vector<Complex> x(rhs.entries().begin(), rhs.entries().end());
  lu_solve_in_place(n, lu, x, n, a.max_abs());
  CMatrix out(n);
  std::copy(x.begin(), x.end(), out.data());
  return out;
}

CVector mat_solve(const CMatrix& a, const CVector& rhs) {
  require_same_dim(a.dim(), rhs.dim(), "mat_solve");
  const std::size_t n = a.dim();
  std::vector<Complex> lu(a.entries().begin(), a.entries().end());
  std::vector<Complex> x(rhs.entries().begin(), rhs.entries().end());
  lu_solve_in_place(n, lu, x, 1, a.max_abs());
  CVector out(n);
  std::copy(x.begin(), x.end(), out.data());
  return out;
}

CMatrix inverse(const CMatrix& a) { return mat_solve(a, CMatrix::identity(a.dim())); }

double operator_norm(const CMatrix& a, std::uint64_t seed) {
  const std::size_t n = a.dim();
  const auto& k = kernels::active();

  const double entry_scale = a.max_abs();
  if (entry_scale == 0.0) return 0.0;
  // Work on A / max|a_ij| so the Gram matrix cannot overflow.
  CMatrix scaled = a;
  scaled *= 1.0 / entry_scale;
  CMatrix gram(n);
  k.gemm(n, scaled.adjoint().data(), scaled.data(), gram.data());

  std::vector<Complex> v = seeded_start(n, seed);
  std::vector<Complex> w(n), scratch(n);
  {
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
  }

  CMatrix iter = gram;
  double mu_prev = rayleigh(k, n, gram, v, scratch);
  double change = 0.0;
  for (int it = 1; it <= kNormMaxIterations; ++it) {
    k.gemv(n, iter.data(), v.data(), w.data());
    double nw = norm2(w);
    if (nw == 0.0) {
      // Start vector fell into the null space of the iteration matrix; restart
      // from the coordinate direction with the largest Gram diagonal.
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (gram(i, i).real() > gram(best, best).real()) best = i;
      std::fill(w.begin(), w.end(), Complex{});
      w[best] = 1.0;
      nw = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    const double mu = rayleigh(k, n, gram, v, scratch);
    change = std::abs(mu - mu_prev);
    if (change <= kNormRelTol * mu) return entry_scale * std::sqrt(std::max(mu, 0.0));
    mu_prev = mu;
    if (it % kNormSquareEvery == 0) {
      CMatrix squared(n);
      k.gemm(n, iter.data(), iter.data(), squared.data());
      const double m = squared.max_abs();
      if (m > 0.0) {
        squared *= 1.0 / m;
        iter = std::move(squared);
      }
    }
  }
  throw NumericalFailure("operator_norm: power iteration did not converge in 1000 iterations",
                         {entry_scale * std::sqrt(std::max(mu_prev, 0.0)), change});
}

double distance(const CMatrix& a, const CMatrix& b) { return operator_norm(a - b); }

double unitarity_defect(const CMatrix& u) {
  CMatrix g = mat_mul(u.adjoint(), u);
  g.add_identity(-1.0);
  return operator_norm(g);
}

std::vector<PowerNorm> mat_power_seq(const CMatrix& a, std::size_t n_max) {
  if (n_max < 1) throw PreconditionError("mat_power_seq: n_max must be at least 1");
  std::vector<PowerNorm> out;
  out.reserve(n_max);
  CMatrix power = a;
  double log_scale = 0.0;
  bool vanished = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1 && !vanished) power = mat_mul(a, power);
    const double norm = vanished ? 0.0 : operator_norm(power);
    if (norm == 0.0) {
      vanished = true;
      out.push_back({n, LogMagnitude::zero()});
      continue;
    }
    out.push_back({n, LogMagnitude::from_log(std::log(norm) + log_scale)});
    if (norm > 1e100 || norm < 1e-100) {
      power *= 1.0 / norm;
      log_scale += std::log(norm);
    }
  }
  return out;
}

}  // namespace seqspec
