#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqspec/eigen.hpp"
#include "seqspec/types.hpp"

namespace seqspec {

/// Running powers of a unimodular number: 1, step, step^2, ... with the
/// modulus reset to one every kernels::kRenormInterval steps, the same scheme
/// the rotated_sum kernel uses.
class PhaseStepper {
 public:
  explicit PhaseStepper(Complex step) noexcept : step_(step) {}
  Complex current() const noexcept { return phase_; }
  void advance() noexcept;
  void advance(std::size_t steps) noexcept;

 private:
  Complex step_;
  Complex phase_{1.0, 0.0};
  std::size_t count_ = 0;
};

/// Checks ||theta| - 1| <= 1e-12 and returns theta / |theta|.
Complex require_unimodular(Complex theta, const char* op);

/// Angular distance on the circle, in [0, pi].
double angular_distance(Complex a, Complex b);

/// Unit vector with real and imaginary parts drawn uniformly from [-1, 1]
/// by a 64-bit Mersenne Twister seeded with `seed`, then normalized.
CVector random_unit_vector(std::size_t dim, std::uint64_t seed);

enum class DecayType { none, geometric, power, log };

const char* to_string(DecayType t) noexcept;
DecayType decay_type_from_string(const std::string& s);

struct DecaySpec {
  DecayType type = DecayType::none;
  double param = 0.0;  // ratio for geometric, exponent for power, unused otherwise

  /// Scalar profile f(n): r^n, (n+1)^-q, 1/ln(n+2) or 0.
  double profile(std::size_t n) const;
};

struct ModeSpec {
  Complex theta;
  CVector v;
};

/// x_n = sum_j theta_j^n v_j + amplitude * f(n) * u, where u is a unit vector
/// drawn from `seed`.
struct ModesPlusDecay {
  std::size_t dim = 1;
  std::size_t horizon = 16384;
  std::vector<ModeSpec> modes;
  DecaySpec decay;
  double decay_amplitude = 1.0;
  std::uint64_t seed = 0;
};

enum class SourceKind { materialized, modes_plus_decay, forced_system_output, custom_table };

const char* to_string(SourceKind k) noexcept;

inline constexpr std::size_t kMinHorizon = 16;

/// A finite stretch x_0 .. x_{N-1} of a bounded vector sequence, stored
/// row-major (N x dim). The sup norm is recorded at construction.
class BoundedSeq {
 public:
  BoundedSeq(std::size_t dim, std::vector<Complex> values, SourceKind source = SourceKind::materialized);

  static BoundedSeq from_vectors(std::span<const CVector> values);
  static BoundedSeq generate(const ModesPlusDecay& spec);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t horizon() const noexcept { return values_.size() / dim_; }
  std::span<const Complex> at(std::size_t n) const { return {values_.data() + n * dim_, dim_}; }
  std::span<const Complex> values() const noexcept { return values_; }
  double norm_at(std::size_t n) const;
  double sup_norm() const noexcept { return sup_norm_; }

  SourceKind source() const noexcept { return source_; }
  const std::optional<ModesPlusDecay>& generator() const noexcept { return generator_; }

 private:
  std::size_t dim_;
  std::vector<Complex> values_;
  double sup_norm_ = 0.0;
  SourceKind source_;
  std::optional<ModesPlusDecay> generator_;
};

/// max(1e-6, 0.01 sup||x_n||)
double default_epsilon(const BoundedSeq& x);
/// max(1e-9, 1e-3 sup||x_n||)
double default_tol_vanish(const BoundedSeq& x);

struct TailStats {
  std::size_t window_start = 0;
  std::size_t window_end = 0;
  double tail_sup = 0.0;
  /// Least-squares slope of ln||x_n|| against ln(n+1) over the nonzero terms
  /// of the window; empty when fewer than two terms are nonzero.
  std::optional<double> trend_slope;
};

/// Tail statistics of a norm profile whose first entry is index `first_index`,
/// over the window [window_start, first_index + norms.size()).
TailStats tail_stats(std::span<const double> norms, std::size_t first_index, std::size_t window_start);

/// Finite-horizon stand-in for limsup ||x_n||: sup over [window_start, N) plus
/// the decay trend.
TailStats tail_norm(const BoundedSeq& x, std::size_t window_start);

struct RotatedMeanResult {
  Complex theta;
  std::size_t first = 0;
  std::size_t n_used = 0;
  CVector mean;
  double mean_norm = 0.0;
};

/// (1/n_used) sum_{n=first}^{first+n_used-1} theta^{-n} x_n
RotatedMeanResult rotated_mean(const BoundedSeq& x, Complex theta, std::size_t n_used, std::size_t first = 0);

struct ScanDetection {
  Complex theta;
  double angle = 0.0;  // radians in [0, 2pi)
  double peak_mean_norm = 0.0;
};

struct SpectrumScanReport {
  std::size_t grid_size = 0;
  double epsilon = 0.0;
  std::size_t n_used = 0;
  std::vector<ScanDetection> detected;
  /// Rotated-mean norm at each grid angle 2 pi m / K.
  std::vector<double> grid_norms;
};

inline constexpr std::size_t kDefaultGridSize = 4096;

/// Rotated Cesaro means over the full horizon at the K grid angles; runs of
/// adjacent grid points above epsilon are merged and each run's peak refined in
/// angle. Detections are sorted by angle.
SpectrumScanReport spectrum_scan(const BoundedSeq& x, std::size_t grid_size, double epsilon);
SpectrumScanReport spectrum_scan(const BoundedSeq& x, std::size_t grid_size = kDefaultGridSize);

struct CheckOptions {
  std::size_t grid_size = kDefaultGridSize;
  std::optional<double> epsilon;     // default_epsilon(x) when empty
  std::optional<double> tol_vanish;  // default_tol_vanish(x) when empty
};

struct VanishingVerdict {
  TailStats tail;
  double tol_vanish = 0.0;
  bool vanishing = false;
  SpectrumScanReport scan;
  bool scan_empty = false;
  bool consistent = false;
};

/// Vanishing tail versus an empty scan.
VanishingVerdict vanishing_check(const BoundedSeq& x, const CheckOptions& options = {});

struct SinglePointVerdict {
  Complex theta;
  TailStats difference_tail;  // of d_n = x_{n+1} - theta x_n over [N/2, N-1)
  double tol_vanish = 0.0;
  bool difference_vanishing = false;
  SpectrumScanReport scan;
  /// Exactly one detection, within 1e-3 rad of theta.
  bool scan_single_at_theta = false;
  /// No detection, or exactly one within 1e-3 rad of theta.
  bool scan_within_theta = false;
  /// difference_vanishing == scan_within_theta
  bool consistent = false;
};

SinglePointVerdict single_point_check(const BoundedSeq& x, Complex theta, const CheckOptions& options = {});

struct Mode {
  Complex theta;
  CVector v;
};

struct ModeDecomp {
  std::vector<Mode> modes;
  std::size_t first = 0;
  std::size_t n_used = 0;
  /// r_n = x_n - sum_j theta_j^n v_j over [first + n_used/2, first + n_used).
  TailStats residual;
};

/// Mode amplitudes by rotated means over [first, first + n_used). Thetas must
/// be pairwise separated by at least 10 / n_used in angle.
ModeDecomp extract_modes(const BoundedSeq& x, std::span<const Complex> thetas, std::size_t n_used,
                         std::size_t first = 0);

struct KtzOptions {
  double peripheral_tol = kDefaultPeripheralTol;
  double limit_tol = 1e-8;
};

struct KtzVerdict {
  Complex theta;
  std::size_t n_max = 0;
  PowerBoundVerdict power;
  bool power_bounded = false;
  std::vector<Complex> peripheral;
  bool peripheral_within_theta = false;
  bool hypotheses_met = false;
  std::vector<std::string> unmet;
  /// ||T^{n+1} - theta T^n|| for n = 0 .. n_max-1; empty when hypotheses fail.
  std::vector<double> difference_norms;
  TailStats difference_tail;  // over [n_max/2, n_max)
  /// Smallest n from which every recorded difference norm is <= limit_tol.
  std::optional<std::size_t> settled_from;
  bool limit_attained = false;
};

KtzVerdict ktz_check(const CMatrix& t, Complex theta, std::size_t n_max, const KtzOptions& options = {});

}  // namespace seqspec
