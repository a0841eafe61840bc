#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqspec/eigen.hpp"
#include "seqspec/sequence.hpp"
#include "seqspec/types.hpp"

namespace seqspec {

enum class ForcingKind { zero, geometric, power, log_decay, custom_table };

const char* to_string(ForcingKind k) noexcept;
ForcingKind forcing_kind_from_string(const std::string& s);

/// y_n = f(n) u with f(n) = r^n, (n+1)^-q or 1/ln(n+2); or an explicit table.
/// When `direction` is empty, u is a unit vector drawn from `seed`.
struct ForcingSpec {
  ForcingKind kind = ForcingKind::zero;
  double param = 0.0;
  std::optional<CVector> direction;
  std::uint64_t seed = 0;
  std::vector<CVector> table;  // custom_table only; must cover the horizon

  /// sum ||y_n|| < inf: geometric always, power iff q > 1, never for log_decay.
  bool summable() const;
};

struct DelaySystem {
  CMatrix b;
  std::size_t p = 1;
  std::vector<CVector> initial;  // x_0 .. x_{p-1}
  ForcingSpec forcing;
};

inline constexpr double kOverflowNorm = 1e100;

struct TrajectoryReport {
  double sup_norm = 0.0;
  GrowthFit growth;
  bool bounded_verdict = false;
  std::size_t horizon = 0;
};

struct Trajectory {
  BoundedSeq values;
  TrajectoryReport report;
};

/// Materialized forcing y_0 .. y_{horizon-1} in dimension `dim`.
std::vector<CVector> forcing_values(const ForcingSpec& forcing, std::size_t dim, std::size_t horizon);

/// x_{n+1} = B x_n + y_n. Throws UnboundedTrajectory once some ||x_n|| > 1e100.
Trajectory simulate_forced(const CMatrix& b, const CVector& x0, const ForcingSpec& forcing, std::size_t horizon);

/// x_{n+p} = B x_n + y_n from x_0 .. x_{p-1}.
Trajectory simulate_delay(const DelaySystem& system, std::size_t horizon);

TrajectoryReport classify_trajectory(const BoundedSeq& x);

struct ModeLimitVerdict {
  std::vector<Complex> peripheral;
  ModeDecomp decomposition;
  double residual_tol = 0.0;
  bool residual_ok = false;
  /// Limit test runs when the peripheral spectrum is empty or {1}.
  bool limit_test_applicable = false;
  /// 2 max_{n in [N/2, N)} ||x_n - x_{N-1}||, an upper bound on the window's diameter.
  double cauchy_tail = 0.0;
  bool limit_exists = false;
  std::optional<CVector> limit;
  bool passed = false;
};

/// Mode decomposition of a bounded trajectory over the peripheral spectrum of B,
/// with amplitudes averaged over the second half of the horizon.
ModeLimitVerdict mode_limit_check(const CMatrix& b, const BoundedSeq& trajectory,
                                double peripheral_tol = kDefaultPeripheralTol, double residual_tol = 1e-6);

struct HypothesisCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct DelayProbeReport {
  std::size_t p = 1;
  std::size_t horizon = 0;
  std::vector<HypothesisCheck> hypotheses;
  bool hypotheses_met = false;
  Complex theta{1.0, 0.0};
  double tol_vanish = 0.0;
  /// sup ||x_{n+1} - theta x_n|| over n in [N/2, N-1)
  TailStats one_step;
  bool one_step_vanishes = false;
  /// sup ||x_{n+p} - theta x_n|| over n in [N/2, N-p)
  TailStats p_step;
  bool p_step_vanishes = false;
  std::vector<Complex> pth_roots;  // mu with mu^p = theta
  SpectrumScanReport scan;
  std::vector<Complex> scan_on_roots;
  std::vector<Complex> scan_off_roots;
};

/// Reports the one-step and p-step difference tails and where the scan of the
/// trajectory sits relative to the p-th roots of theta, without a verdict.
/// theta is the single peripheral eigenvalue of B, or 1 when there is none.
DelayProbeReport delay_probe(const DelaySystem& system, std::size_t horizon,
                             double peripheral_tol = kDefaultPeripheralTol, std::size_t grid_size = kDefaultGridSize);

struct ContainmentVerdict {
  std::vector<Complex> peripheral;
  SpectrumScanReport scan;
  std::vector<ScanDetection> violations;
  bool passed = false;
};

inline constexpr double kContainmentAngleTol = 1e-2;

/// Every scan detection must lie within 1e-2 rad of a peripheral eigenvalue of B.
ContainmentVerdict spectrum_containment_check(const CMatrix& b, const BoundedSeq& trajectory,
                                              double peripheral_tol = kDefaultPeripheralTol,
                                              std::size_t grid_size = kDefaultGridSize);

}  // namespace seqspec
