#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqspec/linalg.hpp"
#include "seqspec/types.hpp"

namespace seqspec {

/// Coefficients in ascending degree: coeffs[k] multiplies t^k.
struct Polynomial {
  std::vector<Complex> coeffs;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  Complex operator()(Complex t) const noexcept;
  Polynomial derivative() const;
};

/// prod_j (t - roots[j]), monic.
Polynomial poly_from_roots(std::span<const Complex> roots);

/// det(tI - A) by the Faddeev-LeVerrier trace recursion.
Polynomial char_poly(const CMatrix& a);

/// All roots with multiplicity by Aberth-Ehrlich simultaneous iteration.
///
/// Starts from a circle of radius 1 + max|coeff| (monic normalisation) at the
/// roots of unity rotated by 0.4 rad. A root is settled once its update falls
/// below 1e-14 (1 + |z|) or its residual reaches the Horner rounding bound.
/// Exact zero roots are deflated first, and clusters that pass a residual test
/// as a multiple root are snapped to a Newton-refined common value.
/// Throws NumericalFailure (per-root residuals) after 500 sweeps.
std::vector<Complex> poly_roots(const Polynomial& p);

inline constexpr double kDefaultPeripheralTol = 1e-8;

struct SpectrumInfo {
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;
  /// Unimodular representatives of the eigenvalues within peripheral_tol of
  /// the unit circle, one per cluster, sorted by angle in [0, 2pi).
  std::vector<Complex> peripheral;
  double peripheral_tol = kDefaultPeripheralTol;
};

std::vector<Complex> eigenvalues(const CMatrix& a);

SpectrumInfo spectrum_info(const CMatrix& a, double peripheral_tol = kDefaultPeripheralTol);

/// ||chi_A(A)|| with chi_A(A) evaluated by matrix Horner recurrence.
double cayley_hamilton_residual(const CMatrix& a);

enum class GrowthClass { decaying, bounded, polynomial_suspect, exponential_suspect };

const char* to_string(GrowthClass c) noexcept;
GrowthClass growth_class_from_string(const std::string& s);

struct GrowthFit {
  GrowthClass growth = GrowthClass::bounded;
  /// Log-log slope of the block-maximum envelope over the window.
  double slope = 0.0;
  double early_slope = 0.0;
  double late_slope = 0.0;
  /// The window ends in exactly-zero magnitudes; slopes are not meaningful.
  bool vanished = false;
};

/// Classifies the growth of a magnitude sequence from its second half.
/// `values[i]` is the magnitude at index `first_index + i`. The window is split
/// into eight blocks; ln(block max) is fitted against ln(index of that max).
///   decaying             slope < -0.05 (or the window ends in exact zeros)
///   exponential-suspect  slope > 0.05 and the late-half slope exceeds the
///                        early-half slope by more than 20 %
///   polynomial-suspect   slope > 0.05 otherwise
///   bounded              everything else
GrowthFit classify_growth(std::span<const LogMagnitude> values, std::size_t first_index);

struct PowerBoundVerdict {
  LogMagnitude sup_norm = LogMagnitude::zero();  // sup over n = 1..n_max of ||A^n||
  bool within_bound = false;
  GrowthFit growth;
  std::size_t n_max = 0;
};

PowerBoundVerdict power_bounded_probe(const CMatrix& a, std::size_t n_max, double bound);

struct GelfandSample {
  std::size_t n;
  LogMagnitude root_norm;  // ||A^n||^(1/n); log() is a_n / n
};

struct GelfandReport {
  std::vector<GelfandSample> samples;
  double estimate = 0.0;
  double eig_radius = 0.0;
  double discrepancy = 0.0;
  bool nilpotent = false;
};

/// exp(min_{n in [n_max/2, n_max]} a_n / n) with a_n = ln||A^n||.
GelfandReport gelfand_radius_estimate(const CMatrix& a, std::size_t n_max);

}  // namespace seqspec
