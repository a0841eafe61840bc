#include "seqspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "seqspec/errors.hpp"
#include "seqspec/kernels.hpp"
#include "seqspec/linalg.hpp"

namespace seqspec {
namespace {

double diff_norm(std::span<const Complex> a, Complex scale, std::span<const Complex> b) {
  CVector d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - scale * b[k];
  return d.norm();
}

// Shared core: x_{n+p} = B x_n + y_n. p = 1 is the forced equation, so the
// two simulators cannot drift apart.
Trajectory iterate(const CMatrix& b, const std::vector<CVector>& initial, const ForcingSpec& forcing,
                   std::size_t horizon, const char* op) {
  const std::size_t d = b.dim();
  const std::size_t p = initial.size();
  for (const CVector& v : initial) {
    if (v.dim() != d) throw PreconditionError(std::string(op) + ": initial vector dimension does not match B");
  }
  if (horizon < kMinHorizon) throw PreconditionError(std::string(op) + ": horizon must be at least 16");
  const std::vector<CVector> y = forcing_values(forcing, d, horizon);

  std::vector<Complex> values(horizon * d);
  for (std::size_t n = 0; n < p && n < horizon; ++n) std::copy_n(initial[n].data(), d, values.data() + n * d);
  const auto& k = kernels::active();
  for (std::size_t n = 0; n + p < horizon; ++n) {
    Complex* next = values.data() + (n + p) * d;
    k.gemv(d, b.data(), values.data() + n * d, next);
    k.axpy(d, Complex{1.0, 0.0}, y[n].data(), next);
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += std::norm(next[i]);
    norm = std::sqrt(norm);
    if (!(norm <= kOverflowNorm)) {
      throw UnboundedTrajectory(std::string(op) + ": ||x_" + std::to_string(n + p) + "|| exceeded 1e100", n + p);
    }
  }
  BoundedSeq seq(d, std::move(values), SourceKind::forced_system_output);
  TrajectoryReport report = classify_trajectory(seq);
  return {std::move(seq), report};
}

}  // namespace

const char* to_string(ForcingKind k) noexcept {
  switch (k) {
    case ForcingKind::zero:
      return "zero";
    case ForcingKind::geometric:
      return "geometric";
    case ForcingKind::power:
      return "power";
    case ForcingKind::log_decay:
      return "log_decay";
    case ForcingKind::custom_table:
      return "custom_table";
  }
  return "unknown";
}

ForcingKind forcing_kind_from_string(const std::string& s) {
  for (ForcingKind k : {ForcingKind::zero, ForcingKind::geometric, ForcingKind::power, ForcingKind::log_decay,
                        ForcingKind::custom_table}) {
    if (s == to_string(k)) return k;
  }
  throw PreconditionError("unknown forcing kind '" + s + "'");
}

bool ForcingSpec::summable() const {
  switch (kind) {
    case ForcingKind::zero:
    case ForcingKind::geometric:
      return true;
    case ForcingKind::power:
      return param > 1.0;
    case ForcingKind::log_decay:
    case ForcingKind::custom_table:
      return false;
  }
  return false;
}

std::vector<CVector> forcing_values(const ForcingSpec& forcing, std::size_t dim, std::size_t horizon) {
  std::vector<CVector> y;
  y.reserve(horizon);
  if (forcing.kind == ForcingKind::custom_table) {
    if (forcing.table.size() < horizon)
      throw PreconditionError("forcing: custom table has " + std::to_string(forcing.table.size()) +
                              " entries, fewer than the horizon " + std::to_string(horizon));
    for (std::size_t n = 0; n < horizon; ++n) {
      if (forcing.table[n].dim() != dim) throw PreconditionError("forcing: custom table entry dimension mismatch");
      y.push_back(forcing.table[n]);
    }
    return y;
  }
  if (forcing.kind == ForcingKind::zero) return std::vector<CVector>(horizon, CVector(dim));
  if (forcing.kind == ForcingKind::geometric && !(forcing.param > 0.0 && forcing.param < 1.0))
    throw PreconditionError("forcing: geometric ratio must lie in (0, 1)");
  if (forcing.kind == ForcingKind::power && !(forcing.param > 0.0))
    throw PreconditionError("forcing: power exponent must be positive");

  const CVector u = forcing.direction ? *forcing.direction : random_unit_vector(dim, forcing.seed);
  if (u.dim() != dim) throw PreconditionError("forcing: direction dimension does not match B");
  for (std::size_t n = 0; n < horizon; ++n) {
    const double dn = static_cast<double>(n);
    double f = 0.0;
    switch (forcing.kind) {
      case ForcingKind::geometric:
        f = std::pow(forcing.param, dn);
        break;
      case ForcingKind::power:
        f = std::pow(dn + 1.0, -forcing.param);
        break;
      case ForcingKind::log_decay:
        f = 1.0 / std::log(dn + 2.0);
        break;
      default:
        break;
    }
    y.push_back(Complex{f, 0.0} * u);
  }
  return y;
}

TrajectoryReport classify_trajectory(const BoundedSeq& x) {
  std::vector<LogMagnitude> norms;
  norms.reserve(x.horizon());
  for (std::size_t n = 0; n < x.horizon(); ++n) norms.push_back(LogMagnitude::of(x.norm_at(n)));
  TrajectoryReport r;
  r.horizon = x.horizon();
  r.sup_norm = x.sup_norm();
  r.growth = classify_growth(norms, 1);
  r.bounded_verdict = r.growth.growth == GrowthClass::decaying || r.growth.growth == GrowthClass::bounded;
  return r;
}

Trajectory simulate_forced(const CMatrix& b, const CVector& x0, const ForcingSpec& forcing, std::size_t horizon) {
  return iterate(b, {x0}, forcing, horizon, "simulate_forced");
}

Trajectory simulate_delay(const DelaySystem& system, std::size_t horizon) {
  if (system.p < 1 || system.p > kMaxDim) throw PreconditionError("simulate_delay: p must lie in [1, 64]");
  if (system.initial.size() != system.p)
    throw PreconditionError("simulate_delay: expected " + std::to_string(system.p) + " initial vectors, got " +
                            std::to_string(system.initial.size()));
  if (horizon < 2 * system.p) throw PreconditionError("simulate_delay: horizon must be at least 2p");
  return iterate(system.b, system.initial, system.forcing, horizon, "simulate_delay");
}

ModeLimitVerdict mode_limit_check(const CMatrix& b, const BoundedSeq& trajectory, double peripheral_tol,
                                double residual_tol) {
  if (trajectory.dim() != b.dim()) throw PreconditionError("mode_limit_check: trajectory dimension does not match B");
  const TrajectoryReport status = classify_trajectory(trajectory);
  if (!status.bounded_verdict)
    throw PreconditionError(std::string("mode_limit_check: trajectory is not bounded (growth ") +
                            to_string(status.growth.growth) + ")");

  ModeLimitVerdict v;
  v.peripheral = spectrum_info(b, peripheral_tol).peripheral;
  v.residual_tol = residual_tol;
  const std::size_t n = trajectory.horizon();
  // Averaging over the second half only: transients from the interior spectrum
  // and the forcing would otherwise bias the amplitudes by O(1/N).
  const std::size_t first = n / 2;
  try {
    v.decomposition = extract_modes(trajectory, v.peripheral, n - first, first);
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string(e.what()) + "; peripheral points this close need a longer horizon");
  }
  v.residual_ok = v.decomposition.residual.tail_sup <= residual_tol;

  v.limit_test_applicable =
      std::all_of(v.peripheral.begin(), v.peripheral.end(), [](Complex p) { return std::abs(p - 1.0) <= 1e-6; });
  if (v.limit_test_applicable) {
    const auto last = trajectory.at(n - 1);
    double spread = 0.0;
    for (std::size_t i = first; i < n; ++i) spread = std::max(spread, diff_norm(trajectory.at(i), 1.0, last));
    v.cauchy_tail = 2.0 * spread;
    v.limit_exists = v.cauchy_tail <= residual_tol;
    if (v.limit_exists) v.limit = v.decomposition.modes.empty() ? CVector(b.dim()) : v.decomposition.modes.front().v;
  }
  v.passed = v.residual_ok && (!v.limit_test_applicable || v.limit_exists);
  return v;
}

DelayProbeReport delay_probe(const DelaySystem& system, std::size_t horizon, double peripheral_tol,
                             std::size_t grid_size) {
  DelayProbeReport r;
  r.p = system.p;
  r.horizon = horizon;

  const SpectrumInfo info = spectrum_info(system.b, peripheral_tol);
  const bool single = info.peripheral.size() <= 1;
  r.hypotheses.push_back({"peripheral spectrum is at most one point", single,
                          std::to_string(info.peripheral.size()) + " peripheral eigenvalue(s)"});
  if (info.peripheral.size() == 1) r.theta = info.peripheral.front();

  std::optional<Trajectory> traj;
  try {
    traj = simulate_delay(system, horizon);
    r.hypotheses.push_back({"trajectory is bounded", traj->report.bounded_verdict,
                            std::string("growth ") + to_string(traj->report.growth.growth)});
  } catch (const UnboundedTrajectory& e) {
    r.hypotheses.push_back({"trajectory is bounded", false, e.what()});
  }
  r.hypotheses_met =
      std::all_of(r.hypotheses.begin(), r.hypotheses.end(), [](const HypothesisCheck& h) { return h.holds; });
  if (!r.hypotheses_met) return r;

  const BoundedSeq& x = traj->values;
  const std::size_t n = x.horizon();
  const std::size_t start = n / 2;
  r.tol_vanish = default_tol_vanish(x);

  std::vector<double> one, pstep;
  for (std::size_t i = start; i + 1 < n; ++i) one.push_back(diff_norm(x.at(i + 1), r.theta, x.at(i)));
  for (std::size_t i = start; i + system.p < n; ++i) pstep.push_back(diff_norm(x.at(i + system.p), r.theta, x.at(i)));
  r.one_step = tail_stats(one, start, start);
  r.one_step_vanishes = r.one_step.tail_sup < r.tol_vanish;
  if (!pstep.empty()) {
    r.p_step = tail_stats(pstep, start, start);
    r.p_step_vanishes = r.p_step.tail_sup < r.tol_vanish;
  }

  const double base = std::arg(r.theta);
  for (std::size_t j = 0; j < system.p; ++j) {
    const double angle = (base + 2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(system.p);
    r.pth_roots.push_back(std::polar(1.0, angle));
  }
  r.scan = spectrum_scan(x, grid_size);
  for (const ScanDetection& d : r.scan.detected) {
    const bool on_root = std::any_of(r.pth_roots.begin(), r.pth_roots.end(), [&](Complex mu) {
      return angular_distance(mu, d.theta) <= kContainmentAngleTol;
    });
    (on_root ? r.scan_on_roots : r.scan_off_roots).push_back(d.theta);
  }
  return r;
}

ContainmentVerdict spectrum_containment_check(const CMatrix& b, const BoundedSeq& trajectory, double peripheral_tol,
                                              std::size_t grid_size) {
  if (trajectory.dim() != b.dim())
    throw PreconditionError("spectrum_containment_check: trajectory dimension does not match B");
  ContainmentVerdict v;
  v.peripheral = spectrum_info(b, peripheral_tol).peripheral;
  v.scan = spectrum_scan(trajectory, grid_size);
  for (const ScanDetection& d : v.scan.detected) {
    const bool near = std::any_of(v.peripheral.begin(), v.peripheral.end(), [&](Complex p) {
      return angular_distance(p, d.theta) <= kContainmentAngleTol;
    });
    if (!near) v.violations.push_back(d);
  }
  v.passed = v.violations.empty();
  return v;
}

}  // namespace seqspec
