#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "seqspec/corpus.hpp"
#include "seqspec/eigen.hpp"
#include "seqspec/errors.hpp"
#include "support.hpp"

namespace seqspec {
namespace {

const Complex I{0.0, 1.0};

void expect_coeffs(const Polynomial& p, std::vector<Complex> expected, double tol) {
  ASSERT_EQ(p.coeffs.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(std::abs(p.coeffs[k] - expected[k]), 0.0, tol) << k;
}

std::vector<Complex> sorted_by_real(std::vector<Complex> z) {
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return z;
}

TEST(CharPoly, Identity) { expect_coeffs(char_poly(CMatrix::identity(2)), {1.0, -2.0, 1.0}, 0.0); }

TEST(CharPoly, TwoByTwo) { expect_coeffs(char_poly(CMatrix{{1.0, 2.0}, {3.0, 4.0}}), {-2.0, -5.0, 1.0}, 1e-14); }

TEST(CharPoly, DiagonalExpansion) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const Complex a{g(rng), g(rng)}, b{g(rng), g(rng)}, c{g(rng), g(rng)};
    // (t-a)(t-b)(t-c) = t^3 - (a+b+c) t^2 + (ab+bc+ca) t - abc
    expect_coeffs(char_poly(CMatrix::diagonal({a, b, c})), {-a * b * c, a * b + b * c + c * a, -(a + b + c), 1.0},
                  1e-12 * (1.0 + std::abs(a) * std::abs(b) * std::abs(c)));
  }
}

TEST(CharPoly, MonicAndDeterminant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = 2 + seed % 6;
    const CMatrix a = random_disk_matrix(d, seed);
    const Polynomial p = char_poly(a);
    EXPECT_NEAR(std::abs(p.coeffs.back() - 1.0), 0.0, 1e-12);
    Complex prod{1.0, 0.0};
    for (const Complex z : eigenvalues(a)) prod *= z;
    const Complex det = p.coeffs[0] * (d % 2 == 0 ? 1.0 : -1.0);
    EXPECT_LE(std::abs(det - prod), 1e-8 * std::max(1.0, std::abs(prod))) << seed;
  }
}

TEST(PolyRoots, UnitRoots) {
  const auto r = sorted_by_real(poly_roots({{-1.0, 0.0, 1.0}}));
  EXPECT_NEAR(std::abs(r[0] + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r[1] - 1.0), 0.0, 1e-14);
}

TEST(PolyRoots, QuadraticFormula) {
  const auto r = sorted_by_real(poly_roots({{-2.0, -5.0, 1.0}}));
  EXPECT_NEAR(std::abs(r[0] - (5.0 - std::sqrt(33.0)) / 2.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(r[1] - (5.0 + std::sqrt(33.0)) / 2.0), 0.0, 1e-13);
}

TEST(PolyRoots, TripleRoot) {
  // (t - i)^3 = t^3 - 3i t^2 - 3 t + i
  const auto r = poly_roots({{I, -3.0, -3.0 * I, 1.0}});
  ASSERT_EQ(r.size(), 3u);
  for (const Complex z : r) EXPECT_LE(std::abs(z - I), 1e-4);
}

TEST(PolyRoots, ZeroRootsAreDeflated) {
  const auto r = poly_roots(poly_from_roots(std::vector<Complex>{0.0, 0.0, 2.0}));
  EXPECT_EQ(std::count(r.begin(), r.end(), Complex{}), 2);
}

TEST(PolyRoots, RejectsConstant) { EXPECT_THROW(poly_roots({{1.0}}), PreconditionError); }

TEST(PolyRoots, RootCoefficientConsistency) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t deg = 1 + static_cast<std::size_t>(trial % 8);
    Polynomial p;
    for (std::size_t k = 0; k <= deg; ++k) p.coeffs.push_back({g(rng), g(rng)});
    const Complex lead = p.coeffs.back();
    const Polynomial q = poly_from_roots(poly_roots(p));
    double scale = 0.0;
    for (const Complex c : p.coeffs) scale = std::max(scale, std::abs(c / lead));
    for (std::size_t k = 0; k <= deg; ++k)
      EXPECT_LE(std::abs(q.coeffs[k] * lead - p.coeffs[k]), 1e-8 * scale * std::abs(lead)) << trial << " " << k;
  }
}

TEST(SpectrumInfo, DiagonalWithPeripheralOne) {
  const SpectrumInfo s = spectrum_info(CMatrix::diagonal({1.0, 0.5}), 1e-8);
  ASSERT_EQ(s.peripheral.size(), 1u);
  EXPECT_NEAR(std::abs(s.peripheral[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(s.spectral_radius, 1.0, 1e-12);
}

TEST(SpectrumInfo, ConjugatePairOnCircle) {
  const SpectrumInfo s = spectrum_info(CMatrix::diagonal({I, -I, 0.3}), 1e-8);
  ASSERT_EQ(s.peripheral.size(), 2u);
  // Sorted by angle in [0, 2pi): i first, then -i.
  EXPECT_NEAR(std::abs(s.peripheral[0] - I), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.peripheral[1] + I), 0.0, 1e-12);
  EXPECT_NEAR(s.spectral_radius, 1.0, 1e-12);
}

TEST(SpectrumInfo, ContractionHasNoPeripheral) {
  const SpectrumInfo s = spectrum_info(CMatrix::diagonal({0.5, 0.25}), 1e-8);
  EXPECT_TRUE(s.peripheral.empty());
  EXPECT_NEAR(s.spectral_radius, 0.5, 1e-12);
}

TEST(SpectrumInfo, RepeatedPeripheralEigenvalueIsOnePoint) {
  const SpectrumInfo s = spectrum_info(CMatrix::identity(3), 1e-8);
  ASSERT_EQ(s.peripheral.size(), 1u);
  EXPECT_EQ(std::abs(s.peripheral[0]), 1.0);
}

TEST(SpectrumInfo, RejectsBadTolerance) {
  EXPECT_THROW(spectrum_info(CMatrix::identity(2), 0.0), PreconditionError);
  EXPECT_THROW(spectrum_info(CMatrix::identity(2), 0.2), PreconditionError);
}

TEST(SpectrumInfo, SimilarityInvariance) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const std::size_t d = 2 + seed % 5;
    std::vector<Complex> planted;
    const CMatrix a = random_diagonalizable(d, 300 + seed, 100.0, &planted);
    const auto found = spectrum_info(a, 1e-8).eigenvalues;
    ASSERT_EQ(found.size(), d);
    EXPECT_LE(testing::multiset_distance(found, planted), 1e-6) << seed;
  }
}

TEST(CayleyHamilton, ZeroMatrixIsExact) { EXPECT_EQ(cayley_hamilton_residual(CMatrix(3)), 0.0); }

TEST(CayleyHamilton, TwoByTwo) { EXPECT_LE(cayley_hamilton_residual(CMatrix{{1.0, 2.0}, {3.0, 4.0}}), 1e-12); }

TEST(CayleyHamilton, RandomFiveByFive) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix a = random_disk_matrix(5, 400 + seed);
    EXPECT_LE(cayley_hamilton_residual(a), 1e-8 * std::pow(1.0 + operator_norm(a), 5.0));
  }
}

TEST(PowerBounded, DiagonalIsBounded) {
  const auto v = power_bounded_probe(CMatrix::diagonal({1.0, 0.5}), 100, 1.0 + 1e-9);
  EXPECT_NEAR(v.sup_norm.value(), 1.0, 1e-12);
  EXPECT_TRUE(v.within_bound);
  EXPECT_EQ(v.growth.growth, GrowthClass::bounded);
}

TEST(PowerBounded, JordanBlockIsPolynomial) {
  const auto v = power_bounded_probe(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, 400, 10.0);
  EXPECT_FALSE(v.within_bound);
  EXPECT_EQ(v.growth.growth, GrowthClass::polynomial_suspect);
  EXPECT_NEAR(v.growth.slope, 1.0, 0.05);
}

TEST(PowerBounded, ExpansionIsExponential) {
  const auto v = power_bounded_probe(CMatrix::diagonal({1.1}), 200, 1e6);
  EXPECT_EQ(v.growth.growth, GrowthClass::exponential_suspect);
}

TEST(PowerBounded, ContractionDecays) {
  EXPECT_EQ(power_bounded_probe(CMatrix::diagonal({0.9, 0.2}), 200, 1.0).growth.growth, GrowthClass::decaying);
  EXPECT_EQ(power_bounded_probe(CMatrix{{0.0, 1.0}, {0.0, 0.0}}, 16, 1.0).growth.growth, GrowthClass::decaying);
}

TEST(PowerBounded, RejectsShortRange) { EXPECT_THROW(power_bounded_probe(CMatrix::identity(1), 7, 1.0), PreconditionError); }

TEST(Gelfand, DiagonalExact) {
  const auto g = gelfand_radius_estimate(CMatrix::diagonal({2.0, 1.0}), 64);
  EXPECT_NEAR(g.estimate, 2.0, 1e-12);
  for (const auto& s : g.samples) EXPECT_NEAR(std::exp(s.root_norm.log()), 2.0, 1e-12);
  EXPECT_FALSE(g.nilpotent);
}

TEST(Gelfand, NilpotentFlag) {
  const auto g = gelfand_radius_estimate(CMatrix{{0.0, 1.0}, {0.0, 0.0}}, 16);
  EXPECT_EQ(g.estimate, 0.0);
  EXPECT_TRUE(g.nilpotent);
}

TEST(Gelfand, PlantedDiagonalizable) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const CMatrix q1 = random_unitary(2, 500 + seed), q2 = random_unitary(2, 600 + seed);
    std::uniform_real_distribution<double> u(1.0, 10.0);
    const double s = u(rng);
    const CMatrix v = mat_mul(q1, mat_mul(CMatrix::diagonal({1.0, s}), q2));
    const CMatrix a = mat_mul(v, mat_mul(CMatrix::diagonal({0.9, 0.5}), inverse(v)));
    EXPECT_LE(std::abs(gelfand_radius_estimate(a, 512).estimate - 0.9), 0.05) << seed;
  }
}

TEST(Gelfand, BoundedBelowByEigenRadius) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gelfand_radius_estimate(random_diagonalizable(4, 700 + seed, 10.0), 64);
    for (const auto& s : g.samples) EXPECT_GE(std::exp(s.root_norm.log()), g.eig_radius - 1e-9);
    EXPECT_NEAR(g.discrepancy, std::abs(g.estimate - g.eig_radius), 1e-15);
  }
}

TEST(GrowthClass, StringRoundTrip) {
  for (GrowthClass c : {GrowthClass::decaying, GrowthClass::bounded, GrowthClass::polynomial_suspect,
                        GrowthClass::exponential_suspect})
    EXPECT_EQ(growth_class_from_string(to_string(c)), c);
  EXPECT_STREQ(to_string(GrowthClass::polynomial_suspect), "polynomial-suspect");
}

}  // namespace
}  // namespace seqspec
