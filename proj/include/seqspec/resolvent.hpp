#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "seqspec/linalg.hpp"
#include "seqspec/types.hpp"

namespace seqspec {

/// (lambda I - A)^{-1} by direct solve. Throws SingularMatrixError when lambda
/// is numerically in the spectrum.
CMatrix resolvent_direct(const CMatrix& a, Complex lambda);

/// ||(lambda I - A)^{-1}||
double resolvent_norm(const CMatrix& a, Complex lambda);

struct NeumannResult {
  CMatrix sum;
  double last_term_norm;  // ||A^k_max / lambda^(k_max+1)||, the truncation indicator
};

/// Partial Laurent sum sum_{n=0}^{k_max} A^n / lambda^(n+1). Throws
/// DivergenceError when the last ten term norms never decrease, which is what
/// happens for |lambda| <= rho(A).
NeumannResult resolvent_neumann(const CMatrix& a, Complex lambda, std::size_t k_max);

using VectorOracle = std::function<CVector(Complex)>;

inline constexpr std::size_t kDefaultQuadratureNodes = 256;

/// k-th Taylor coefficient of f from the trapezoidal rule on |z| = radius:
/// (1/M) sum_m z_m^{-k} f(z_m). Exact for polynomials of degree < nodes - k.
CVector cauchy_coefficient(const VectorOracle& f, std::size_t k, double radius,
                           std::size_t nodes = kDefaultQuadratureNodes);

struct ResolventSample {
  Complex lambda;
  double resolvent_norm;  // +inf when the solve failed
  bool singular;
};

inline constexpr double kSingularNormThreshold = 1e14;

/// One sample per grid point, in input order. Spectral hits are flagged, not thrown.
std::vector<ResolventSample> resolvent_norm_scan(const CMatrix& a, std::span<const Complex> grid);

std::vector<Complex> circle_grid(Complex center, double radius, std::size_t count);
std::vector<Complex> rect_grid(double re_min, double re_max, double im_min, double im_max, std::size_t nx,
                               std::size_t ny);

struct IsometryBoundReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_slack = 0.0;  // min over samples of 1/||lambda|-1| - ||R(lambda)||
  Complex worst_lambda;
  bool passed = false;
};

inline constexpr double kUnitaryTol = 1e-10;

/// Checks ||R(lambda, U)|| <= 1/||lambda| - 1| (+1e-9) at every sample.
IsometryBoundReport isometry_bound_check(const CMatrix& u, std::span<const Complex> samples);

struct PoleProbeReport {
  Complex center;
  std::vector<double> radii;
  std::vector<double> norms;
  double fitted_order = 0.0;
};

/// Samples ||R(theta + r e^{i pi/4})|| over the given radii and fits the slope
/// of ln(norm) against -ln(r). A simple pole gives slope 1.
PoleProbeReport pole_order_probe(const CMatrix& u, Complex theta, std::span<const double> radii);

}  // namespace seqspec
