#include "seqspec/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "seqspec/errors.hpp"
#include "seqspec/linalg.hpp"

namespace seqspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex unit() { return std::polar(1.0, uniform(0.0, kTwoPi)); }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

CVector random_vector(Rng& rng, std::size_t dim, double norm) {
  std::vector<Complex> v(dim);
  for (auto& z : v) z = {rng.gaussian(), rng.gaussian()};
  CVector out(std::move(v));
  out *= norm / out.norm();
  return out;
}

// Angles pairwise at least `sep` apart on the circle.
std::vector<double> separated_angles(Rng& rng, std::size_t count, double sep) {
  std::vector<double> out;
  while (out.size() < count) {
    const double a = rng.uniform(0.0, kTwoPi);
    bool ok = true;
    for (double b : out) {
      const double d = std::fmod(std::abs(a - b), kTwoPi);
      ok = ok && std::min(d, kTwoPi - d) >= sep;
    }
    if (ok) out.push_back(a);
  }
  return out;
}

DecaySpec random_decay(Rng& rng) {
  if (rng.below(2) == 0) return {DecayType::geometric, rng.uniform(0.5, 0.95)};
  return {DecayType::power, rng.uniform(1.0, 2.0)};
}

}  // namespace

const char* to_string(CorpusFamily f) noexcept {
  switch (f) {
    case CorpusFamily::vanishing:
      return "vanishing";
    case CorpusFamily::single_mode:
      return "single_mode";
    case CorpusFamily::two_mode:
      return "two_mode";
    case CorpusFamily::mode_plus_decay:
      return "mode_plus_decay";
  }
  return "unknown";
}

std::vector<CorpusMember> sequence_corpus(std::uint64_t seed, std::size_t horizon, std::size_t count) {
  Rng rng(seed);
  std::vector<CorpusMember> out;
  for (std::size_t i = 0; i < count; ++i) {
    CorpusMember m;
    m.family = static_cast<CorpusFamily>(i % 4);
    m.name = "seq_" + std::string(i < 10 ? "0" : "") + std::to_string(i) + "_" + to_string(m.family);
    m.spec.dim = 1 + rng.below(3);
    m.spec.horizon = horizon;
    m.spec.seed = rng.next();
    std::size_t modes = 0;
    switch (m.family) {
      case CorpusFamily::vanishing:
        m.spec.decay = random_decay(rng);
        m.spec.decay_amplitude = rng.uniform(0.5, 2.0);
        m.expect_vanishing = true;
        break;
      case CorpusFamily::single_mode:
        modes = 1;
        break;
      case CorpusFamily::two_mode:
        modes = 2;
        break;
      case CorpusFamily::mode_plus_decay:
        modes = 1;
        m.spec.decay = random_decay(rng);
        m.spec.decay_amplitude = rng.uniform(0.2, 1.0);
        break;
    }
    for (double angle : separated_angles(rng, modes, 0.5)) {
      m.spec.modes.push_back({std::polar(1.0, angle), random_vector(rng, m.spec.dim, rng.uniform(0.5, 2.0))});
    }
    if (modes == 1) m.single_theta = m.spec.modes.front().theta;
    out.push_back(std::move(m));
  }
  return out;
}

CMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  // Columns of a Gaussian matrix, orthonormalised by modified Gram-Schmidt
  // applied twice for numerical orthogonality.
  std::vector<CVector> cols;
  for (std::size_t j = 0; j < dim; ++j) {
    CVector v = random_vector(rng, dim, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : cols) {
        Complex dot{};
        for (std::size_t k = 0; k < dim; ++k) dot += std::conj(q[k]) * v[k];
        for (std::size_t k = 0; k < dim; ++k) v[k] -= dot * q[k];
      }
      v *= 1.0 / v.norm();
    }
    cols.push_back(std::move(v));
  }
  CMatrix u(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) u(r, c) = cols[c][r];
  return u;
}

CMatrix random_diagonalizable(std::size_t dim, std::uint64_t seed, double max_cond, std::vector<Complex>* eigenvalues) {
  if (!(max_cond >= 1.0)) throw PreconditionError("random_diagonalizable: max_cond must be at least 1");
  Rng rng(seed);
  std::vector<Complex> d(dim), s(dim);
  for (auto& z : d) z = std::polar(rng.uniform(0.1, 2.0), rng.uniform(0.0, kTwoPi));
  for (auto& z : s) z = rng.uniform(1.0, max_cond);
  const CMatrix q1 = random_unitary(dim, rng.next());
  const CMatrix q2 = random_unitary(dim, rng.next());
  // V = Q1 S Q2, V^{-1} = Q2^H S^{-1} Q1^H; cond(V) = max s / min s.
  std::vector<Complex> s_inv(dim);
  for (std::size_t i = 0; i < dim; ++i) s_inv[i] = 1.0 / s[i];
  const CMatrix v = mat_mul(q1, mat_mul(CMatrix::diagonal(s), q2));
  const CMatrix v_inv = mat_mul(q2.adjoint(), mat_mul(CMatrix::diagonal(s_inv), q1.adjoint()));
  if (eigenvalues != nullptr) *eigenvalues = d;
  return mat_mul(v, mat_mul(CMatrix::diagonal(d), v_inv));
}

CMatrix random_disk_matrix(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> entries(dim * dim);
  for (auto& z : entries) z = std::polar(std::sqrt(rng.uniform(0.0, 1.0)), rng.uniform(0.0, kTwoPi));
  return CMatrix(dim, std::move(entries));
}

}  // namespace seqspec
