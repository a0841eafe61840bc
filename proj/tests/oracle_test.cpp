// Each test computes its expected value from a closed form written out here,
// independent of the library routine under test.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "seqspec/corpus.hpp"
#include "seqspec/dynamics.hpp"
#include "seqspec/eigen.hpp"
#include "seqspec/resolvent.hpp"
#include "seqspec/sequence.hpp"
#include "support.hpp"

namespace seqspec {
namespace {

Complex disk_point(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

BoundedSeq scalar_seq(std::size_t n, auto f) {
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = f(k);
  return BoundedSeq(1, std::move(v));
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

TEST(Oracle, TwoByTwoNormFromGramEigenvalues) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = testing::gaussian_matrix(rng, 2);
    // sigma_max^2 = (tr G + sqrt(tr G^2 - 4 det G)) / 2 with G = A^H A.
    const double g11 = std::norm(a(0, 0)) + std::norm(a(1, 0));
    const double g22 = std::norm(a(0, 1)) + std::norm(a(1, 1));
    const Complex g12 = std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1);
    const double tr = g11 + g22, det = g11 * g22 - std::norm(g12);
    const double sigma = std::sqrt((tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det))) / 2.0);
    EXPECT_LE(rel(operator_norm(a), sigma), 1e-12);
  }
}

TEST(Oracle, JordanPowerNorms) {
  // J^n = [[1, n], [0, 1]] has largest singular value (n + sqrt(n^2 + 4)) / 2.
  const auto seq = mat_power_seq(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, 300);
  for (const auto& s : seq) {
    const double n = static_cast<double>(s.n);
    EXPECT_LE(rel(s.norm(), (n + std::sqrt(n * n + 4.0)) / 2.0), 1e-12) << s.n;
  }
}

TEST(Oracle, CharPolyByCofactors) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix a = testing::gaussian_matrix(rng, 3);
    const auto m = [&](std::size_t i, std::size_t j) { return a(i, j); };
    const Complex tr = m(0, 0) + m(1, 1) + m(2, 2);
    const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                           m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const Complex det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                        m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                        m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    const Polynomial p = char_poly(a);
    ASSERT_EQ(p.coeffs.size(), 4u);
    EXPECT_LE(std::abs(p.coeffs[3] - 1.0), 1e-13);
    EXPECT_LE(std::abs(p.coeffs[2] + tr), 1e-12);
    EXPECT_LE(std::abs(p.coeffs[1] - minors), 1e-12);
    EXPECT_LE(std::abs(p.coeffs[0] + det), 1e-12);
  }
}

TEST(Oracle, QuadraticRootsByFormula) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex b = 3.0 * disk_point(rng), c = 3.0 * disk_point(rng);
    const Complex s = std::sqrt(b * b - 4.0 * c);
    const std::vector<Complex> want{(-b + s) / 2.0, (-b - s) / 2.0};
    if (std::abs(want[0] - want[1]) < 1e-3) continue;
    EXPECT_LE(testing::multiset_distance(poly_roots({{c, b, 1.0}}), want), 1e-12);
  }
}

TEST(Oracle, NormalResolventIsInverseDistance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<Complex> eig;
    for (int k = 0; k < 4; ++k) eig.push_back(disk_point(rng, 1.5));
    const CMatrix q = random_unitary(4, seed + 40);
    const CMatrix a = mat_mul(q, mat_mul(CMatrix::diagonal(eig), q.adjoint()));
    for (int s = 0; s < 10; ++s) {
      const Complex lambda = disk_point(rng, 3.0);
      double dist = 1e300;
      for (const Complex z : eig) dist = std::min(dist, std::abs(lambda - z));
      if (dist < 1e-3) continue;
      EXPECT_LE(rel(resolvent_norm(a, lambda), 1.0 / dist), 1e-9);
    }
  }
}

TEST(Oracle, ScalarNeumannPartialSum) {
  // sum_{n<=k} a^n / lambda^{n+1} = (1 - (a/lambda)^{k+1}) / (lambda - a)
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = disk_point(rng), lambda = std::polar(1.5, 2.0 * trial);
    const std::size_t k = 40;
    const Complex want = (1.0 - std::pow(a / lambda, static_cast<double>(k + 1))) / (lambda - a);
    EXPECT_LE(std::abs(resolvent_neumann(CMatrix::diagonal({a}), lambda, k).sum(0, 0) - want), 1e-13);
  }
}

TEST(Oracle, TrapezoidAliasingOfGeometricSeries) {
  // f(z) = 1/(1 - a z): the M-node rule returns sum_j a^{k + jM} = a^k / (1 - a^M).
  for (const Complex a : {Complex{0.5, 0.0}, Complex{0.3, 0.6}, Complex{-0.8, 0.1}}) {
    const VectorOracle f = [a](Complex z) { return CVector{1.0 / (1.0 - a * z)}; };
    for (std::size_t m : {8, 16, 64}) {
      for (std::size_t k = 0; k < 5; ++k) {
        const Complex want = std::pow(a, static_cast<double>(k)) / (1.0 - std::pow(a, static_cast<double>(m)));
        EXPECT_LE(std::abs(cauchy_coefficient(f, k, 1.0, m)[0] - want), 1e-14) << a << " " << m << " " << k;
      }
    }
  }
}

TEST(Oracle, RotatedMeanOfPureToneIsGeometricSum) {
  // (1/N) sum_n (mu/theta)^n = (1 - q^N) / (N (1 - q)) with q = mu / theta.
  const std::size_t n = 5000;
  for (double phi : {0.01, 0.5, 2.0, 3.1}) {
    const Complex mu = std::polar(1.0, phi), theta = std::polar(1.0, 0.3);
    const BoundedSeq x = scalar_seq(n, [&](std::size_t k) { return std::polar(1.0, phi * static_cast<double>(k)); });
    const Complex q = mu / theta;
    const Complex want = (1.0 - std::polar(1.0, static_cast<double>(n) * std::arg(q))) / (static_cast<double>(n) * (1.0 - q));
    EXPECT_LE(std::abs(rotated_mean(x, theta, n).mean[0] - want), 1e-12) << phi;
  }
}

TEST(Oracle, ConstantPlusAlternatingPlusHarmonicMean) {
  // mean over n < N of 2 + 3(-1)^n + 1/(n+1) = 2 + 3 [N odd] / N + H_N / N
  for (std::size_t n : {10000, 10001}) {
    const BoundedSeq x = scalar_seq(n, [](std::size_t k) {
      return 2.0 + (k % 2 ? -3.0 : 3.0) + 1.0 / static_cast<double>(k + 1);
    });
    long double h = 0.0L;
    for (std::size_t k = n; k >= 1; --k) h += 1.0L / static_cast<long double>(k);
    const double want = 2.0 + (n % 2 ? 3.0 / static_cast<double>(n) : 0.0) + static_cast<double>(h) / static_cast<double>(n);
    EXPECT_LE(std::abs(rotated_mean(x, 1.0, n).mean[0] - want), 1e-12);
  }
}

TEST(Oracle, MonotoneTailSupAtWindowStart) {
  const BoundedSeq x = scalar_seq(1024, [](std::size_t k) { return 1.0 / static_cast<double>(k + 1); });
  EXPECT_EQ(tail_norm(x, 512).tail_sup, 1.0 / 513.0);
}

TEST(Oracle, ScalarForcedRecurrence) {
  // x_{n+1} = b x_n + r^n: x_n = b^n x_0 + (b^n - r^n) / (b - r).
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex b = disk_point(rng, 0.99);
    const double r = 0.2 + 0.6 * std::uniform_real_distribution<double>()(rng);
    const Complex x0 = disk_point(rng);
    ForcingSpec f{ForcingKind::geometric, r};
    f.direction = CVector{1.0};
    const auto t = simulate_forced(CMatrix::diagonal({b}), CVector{x0}, f, 200);
    for (std::size_t n = 0; n < 200; ++n) {
      const double nn = static_cast<double>(n);
      const Complex want = std::pow(b, nn) * x0 + (std::pow(b, nn) - std::pow(r, nn)) / (b - r);
      EXPECT_LE(std::abs(t.values.at(n)[0] - want), 1e-12) << trial << " " << n;
    }
  }
}

TEST(Oracle, InterleavedDelayStrands) {
  // x_{n+2} = c x_n: x_n = c^{floor(n/2)} x_{n mod 2}.
  const Complex c = std::polar(0.97, 0.4);
  const DelaySystem s{CMatrix::diagonal({c}), 2, {CVector{Complex{1.0, 0.5}}, CVector{-2.0}}, {}};
  const auto t = simulate_delay(s, 300);
  for (std::size_t n = 0; n < 300; ++n) {
    const Complex start = n % 2 ? Complex{-2.0, 0.0} : Complex{1.0, 0.5};
    EXPECT_LE(std::abs(t.values.at(n)[0] - std::pow(c, static_cast<double>(n / 2)) * start), 1e-12);
  }
}

TEST(Oracle, DiagonalIterateDifferences) {
  // T = diag(1, 0.5): ||T^{n+1} - T^n|| = 0.5^{n+1}.
  const KtzVerdict v = ktz_check(CMatrix::diagonal({1.0, 0.5}), 1.0, 200);
  ASSERT_TRUE(v.hypotheses_met);
  for (std::size_t n = 0; n < v.difference_norms.size(); ++n)
    EXPECT_LE(std::abs(v.difference_norms[n] - std::pow(0.5, static_cast<double>(n + 1))),
              1e-12 * std::pow(0.5, static_cast<double>(n + 1)) + 1e-300);
  ASSERT_TRUE(v.settled_from.has_value());
  // 0.5^{n+1} <= 1e-8 first at n = 26.
  EXPECT_EQ(*v.settled_from, 26u);
}

TEST(Oracle, GelfandOfNormalMatrixIsExact) {
  // ||A^n|| = rho^n for normal A, so every root norm equals rho.
  const CMatrix q = random_unitary(3, 6);
  const CMatrix a = mat_mul(q, mat_mul(CMatrix::diagonal({0.7, Complex{0.0, -0.9}, 0.2}), q.adjoint()));
  const auto g = gelfand_radius_estimate(a, 64);
  for (const auto& s : g.samples) EXPECT_LE(std::abs(s.root_norm.value() - 0.9), 1e-12);
}

TEST(Oracle, TwoByTwoCayleyHamiltonByHand) {
  const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const Polynomial p = char_poly(a);
  EXPECT_EQ(p.coeffs, (std::vector<Complex>{-2.0, -5.0, 1.0}));
  const CMatrix a2 = mat_mul(a, a);  // [[7, 10], [15, 22]]
  EXPECT_EQ(a2, (CMatrix{{7.0, 10.0}, {15.0, 22.0}}));
  EXPECT_LE(cayley_hamilton_residual(a), 1e-12);
}

}  // namespace
}  // namespace seqspec
