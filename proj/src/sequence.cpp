#include "seqspec/sequence.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "seqspec/errors.hpp"
#include "seqspec/kernels.hpp"
#include "seqspec/linalg.hpp"

namespace seqspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_0_2pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

double span_norm(std::span<const Complex> v) {
  double scale = 0.0;
  for (const Complex& z : v) scale = std::max(scale, std::max(std::abs(z.real()), std::abs(z.imag())));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z / scale);
  return scale * std::sqrt(s);
}

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Full-horizon rotated-mean norms at the L equispaced angles 2 pi l / L
// (L >= N), one forward transform per component of the zero-padded sequence.
std::vector<double> fine_mean_norms(const BoundedSeq& x, std::size_t fine) {
  const std::size_t n = x.horizon();
  const std::size_t d = x.dim();
  FftwBuffer in(fine * d), out(fine * d);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const int len = static_cast<int>(fine);
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(d), in.data, nullptr, static_cast<int>(d), 1, out.data,
                              nullptr, static_cast<int>(d), 1, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  const auto values = x.values();
  for (std::size_t i = 0; i < fine * d; ++i) {
    const Complex z = i < n * d ? values[i] : Complex{};
    in.data[i][0] = z.real();
    in.data[i][1] = z.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> norms(fine);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t l = 0; l < fine; ++l) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const fftw_complex& z = out.data[l * d + k];
      s += z[0] * z[0] + z[1] * z[1];
    }
    norms[l] = std::sqrt(s) * inv_n;
  }
  return norms;
}

double mean_norm_at(const BoundedSeq& x, double angle) {
  return rotated_mean(x, std::polar(1.0, angle), x.horizon()).mean_norm;
}

// Golden-section maximisation of the full-horizon mean norm on [lo, hi].
std::pair<double, double> golden_max(const BoundedSeq& x, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = mean_norm_at(x, c);
  double fe = mean_norm_at(x, e);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = mean_norm_at(x, c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = mean_norm_at(x, e);
    }
  }
  return fc >= fe ? std::pair{c, fc} : std::pair{e, fe};
}

}  // namespace

CVector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(dim);
  for (auto& z : v) z = {u(rng), u(rng)};
  CVector out(std::move(v));
  out *= 1.0 / out.norm();
  return out;
}

void PhaseStepper::advance() noexcept {
  phase_ = {phase_.real() * step_.real() - phase_.imag() * step_.imag(),
            phase_.real() * step_.imag() + phase_.imag() * step_.real()};
  if (++count_ % kernels::kRenormInterval == 0) phase_ /= std::abs(phase_);
}

void PhaseStepper::advance(std::size_t steps) noexcept {
  for (std::size_t i = 0; i < steps; ++i) advance();
}

Complex require_unimodular(Complex theta, const char* op) {
  const double m = std::abs(theta);
  if (!(std::abs(m - 1.0) <= 1e-12)) {
    throw PreconditionError(std::string(op) + ": theta must be unimodular within 1e-12 (|theta| = " + std::to_string(m) + ")");
  }
  return theta / m;
}

double angular_distance(Complex a, Complex b) {
  const double diff = angle_0_2pi(std::arg(a) - std::arg(b));
  return std::min(diff, kTwoPi - diff);
}

const char* to_string(DecayType t) noexcept {
  switch (t) {
    case DecayType::none:
      return "none";
    case DecayType::geometric:
      return "geometric";
    case DecayType::power:
      return "power";
    case DecayType::log:
      return "log";
  }
  return "unknown";
}

DecayType decay_type_from_string(const std::string& s) {
  for (DecayType t : {DecayType::none, DecayType::geometric, DecayType::power, DecayType::log}) {
    if (s == to_string(t)) return t;
  }
  throw PreconditionError("unknown decay type '" + s + "'");
}

double DecaySpec::profile(std::size_t n) const {
  const double dn = static_cast<double>(n);
  switch (type) {
    case DecayType::none:
      return 0.0;
    case DecayType::geometric:
      return std::pow(param, dn);
    case DecayType::power:
      return std::pow(dn + 1.0, -param);
    case DecayType::log:
      return 1.0 / std::log(dn + 2.0);
  }
  return 0.0;
}

const char* to_string(SourceKind k) noexcept {
  switch (k) {
    case SourceKind::materialized:
      return "materialized";
    case SourceKind::modes_plus_decay:
      return "modes_plus_decay";
    case SourceKind::forced_system_output:
      return "forced_system_output";
    case SourceKind::custom_table:
      return "custom_table";
  }
  return "unknown";
}

BoundedSeq::BoundedSeq(std::size_t dim, std::vector<Complex> values, SourceKind source)
    : dim_(dim), values_(std::move(values)), source_(source) {
  if (dim_ < 1) throw PreconditionError("BoundedSeq: dimension must be positive");
  if (values_.size() % dim_ != 0) throw PreconditionError("BoundedSeq: value count is not a multiple of the dimension");
  if (horizon() < kMinHorizon)
    throw PreconditionError("BoundedSeq: horizon " + std::to_string(horizon()) + " is below the minimum of 16");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!is_finite(values_[i])) throw PreconditionError("BoundedSeq: non-finite value at term " + std::to_string(i / dim_));
  }
  for (std::size_t n = 0; n < horizon(); ++n) sup_norm_ = std::max(sup_norm_, norm_at(n));
}

BoundedSeq BoundedSeq::from_vectors(std::span<const CVector> values) {
  if (values.empty()) throw PreconditionError("BoundedSeq: empty sequence");
  const std::size_t dim = values.front().dim();
  std::vector<Complex> flat;
  flat.reserve(values.size() * dim);
  for (const CVector& v : values) {
    if (v.dim() != dim) throw PreconditionError("BoundedSeq: terms have differing dimensions");
    flat.insert(flat.end(), v.entries().begin(), v.entries().end());
  }
  return BoundedSeq(dim, std::move(flat));
}

BoundedSeq BoundedSeq::generate(const ModesPlusDecay& spec) {
  if (spec.dim < 1) throw PreconditionError("modes_plus_decay: dimension must be positive");
  if (spec.horizon < kMinHorizon) throw PreconditionError("modes_plus_decay: horizon must be at least 16");
  std::vector<PhaseStepper> phases;
  for (const ModeSpec& m : spec.modes) {
    if (m.v.dim() != spec.dim) throw PreconditionError("modes_plus_decay: mode vector dimension mismatch");
    phases.emplace_back(require_unimodular(m.theta, "modes_plus_decay"));
  }
  if (spec.decay.type == DecayType::geometric && !(spec.decay.param > 0.0 && spec.decay.param < 1.0))
    throw PreconditionError("modes_plus_decay: geometric decay ratio must lie in (0, 1)");
  if (spec.decay.type == DecayType::power && !(spec.decay.param > 0.0))
    throw PreconditionError("modes_plus_decay: power decay exponent must be positive");

  const CVector direction = random_unit_vector(spec.dim, spec.seed);
  std::vector<Complex> values(spec.horizon * spec.dim);
  for (std::size_t n = 0; n < spec.horizon; ++n) {
    Complex* row = values.data() + n * spec.dim;
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
      const Complex p = phases[j].current();
      for (std::size_t k = 0; k < spec.dim; ++k) row[k] += p * spec.modes[j].v[k];
      phases[j].advance();
    }
    const double f = spec.decay_amplitude * spec.decay.profile(n);
    if (f != 0.0)
      for (std::size_t k = 0; k < spec.dim; ++k) row[k] += f * direction[k];
  }
  BoundedSeq seq(spec.dim, std::move(values), SourceKind::modes_plus_decay);
  seq.generator_ = spec;
  return seq;
}

double BoundedSeq::norm_at(std::size_t n) const { return span_norm(at(n)); }

double default_epsilon(const BoundedSeq& x) { return std::max(1e-6, 0.01 * x.sup_norm()); }

double default_tol_vanish(const BoundedSeq& x) { return std::max(1e-9, 1e-3 * x.sup_norm()); }

TailStats tail_stats(std::span<const double> norms, std::size_t first_index, std::size_t window_start) {
  const std::size_t end = first_index + norms.size();
  if (window_start < first_index || window_start >= end) throw PreconditionError("tail statistics: window start outside the sequence");
  TailStats t;
  t.window_start = window_start;
  t.window_end = end;
  std::vector<double> xs, ys;
  for (std::size_t n = window_start; n < end; ++n) {
    const double v = norms[n - first_index];
    t.tail_sup = std::max(t.tail_sup, v);
    if (v > 0.0) {
      xs.push_back(std::log(static_cast<double>(n) + 1.0));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0.0) t.trend_slope = sxy / sxx;
  }
  return t;
}

TailStats tail_norm(const BoundedSeq& x, std::size_t window_start) {
  if (window_start >= x.horizon()) throw PreconditionError("tail_norm: window_start must be below the horizon");
  std::vector<double> norms(x.horizon() - window_start);
  for (std::size_t n = window_start; n < x.horizon(); ++n) norms[n - window_start] = x.norm_at(n);
  return tail_stats(norms, window_start, window_start);
}

RotatedMeanResult rotated_mean(const BoundedSeq& x, Complex theta, std::size_t n_used, std::size_t first) {
  const Complex unit = require_unimodular(theta, "rotated_mean");
  if (n_used < 1) throw PreconditionError("rotated_mean: n_used must be positive");
  if (first + n_used > x.horizon()) throw PreconditionError("rotated_mean: n_used exceeds the horizon");
  const Complex inverse_step = std::conj(unit);
  RotatedMeanResult r;
  r.theta = unit;
  r.first = first;
  r.n_used = n_used;
  r.mean = CVector(x.dim());
  kernels::active().rotated_sum(x.values().data() + first * x.dim(), n_used, x.dim(), inverse_step, r.mean.data());
  Complex scale = 1.0 / static_cast<double>(n_used);
  if (first > 0) {
    PhaseStepper offset(inverse_step);
    offset.advance(first);
    scale *= offset.current();
  }
  r.mean *= scale;
  r.mean_norm = r.mean.norm();
  return r;
}

SpectrumScanReport spectrum_scan(const BoundedSeq& x, std::size_t grid_size) {
  return spectrum_scan(x, grid_size, default_epsilon(x));
}

SpectrumScanReport spectrum_scan(const BoundedSeq& x, std::size_t grid_size, double epsilon) {
  if (grid_size < 64) throw PreconditionError("spectrum_scan: grid_size must be at least 64");
  if (!(epsilon > 0.0)) throw PreconditionError("spectrum_scan: epsilon must be positive");
  const std::size_t n = x.horizon();
  const std::size_t k = grid_size;

  // Oversample the K-grid so every cell holds angles spaced at most pi / N
  // apart; the Dirichlet main lobe of a mode can then never fall between samples.
  std::size_t over = 1;
  while (k * over < 2 * n) over *= 2;
  const std::size_t fine = k * over;
  const std::vector<double> fine_norms = fine_mean_norms(x, fine);

  SpectrumScanReport report;
  report.grid_size = k;
  report.epsilon = epsilon;
  report.n_used = n;
  report.grid_norms.resize(k);
  std::vector<double> cell_max(k, 0.0);
  std::vector<std::size_t> cell_arg(k, 0);
  for (std::size_t m = 0; m < k; ++m) {
    report.grid_norms[m] = fine_norms[m * over];
    // Cell m collects the fine angles nearest to grid angle m.
    for (std::size_t j = 0; j < over; ++j) {
      const std::size_t l = (m * over + fine - over / 2 + j) % fine;
      if (j == 0 || fine_norms[l] > cell_max[m]) {
        cell_max[m] = fine_norms[l];
        cell_arg[m] = l;
      }
    }
  }

  std::vector<bool> above(k);
  std::size_t count_above = 0;
  for (std::size_t m = 0; m < k; ++m) {
    above[m] = cell_max[m] > epsilon;
    count_above += above[m] ? 1 : 0;
  }
  if (count_above == 0) return report;

  // Circular runs of above-threshold cells; start scanning just after a gap.
  std::vector<std::vector<std::size_t>> runs;
  if (count_above == k) {
    runs.emplace_back();
    for (std::size_t m = 0; m < k; ++m) runs.back().push_back(m);
  } else {
    std::size_t start = 0;
    while (above[start]) ++start;
    for (std::size_t step = 1; step <= k; ++step) {
      const std::size_t m = (start + step) % k;
      if (!above[m]) continue;
      if (!above[(m + k - 1) % k]) runs.emplace_back();
      runs.back().push_back(m);
    }
  }

  const double fine_step = kTwoPi / static_cast<double>(fine);
  std::vector<ScanDetection> found;
  for (const auto& run : runs) {
    std::size_t best_cell = run.front();
    for (std::size_t m : run)
      if (cell_max[m] > cell_max[best_cell]) best_cell = m;
    const double centre = fine_step * static_cast<double>(cell_arg[best_cell]);
    auto [angle, peak] = golden_max(x, centre - fine_step, centre + fine_step);
    const double at_centre = mean_norm_at(x, centre);
    if (at_centre >= peak) {
      angle = centre;
      peak = at_centre;
    }
    if (!(peak > epsilon)) continue;
    angle = angle_0_2pi(angle);
    found.push_back({std::polar(1.0, angle), angle, peak});
  }

  // Strongest first. A weaker candidate survives only if it is more than one
  // grid spacing from every kept point and still exceeds epsilon after
  // removing the worst-case Dirichlet leakage A / (N sin(delta/2)) of each
  // kept point; otherwise it is a sidelobe, which matters once K >~ N.
  std::sort(found.begin(), found.end(), [](const ScanDetection& a, const ScanDetection& b) {
    return a.peak_mean_norm > b.peak_mean_norm;
  });
  const double spacing = kTwoPi / static_cast<double>(k);
  for (const ScanDetection& d : found) {
    bool clash = false;
    double leakage = 0.0;
    for (const ScanDetection& kept : report.detected) {
      const double delta = angular_distance(d.theta, kept.theta);
      clash = clash || delta <= spacing;
      leakage += kept.peak_mean_norm / (static_cast<double>(n) * std::sin(0.5 * delta));
    }
    if (!clash && d.peak_mean_norm - leakage > epsilon) report.detected.push_back(d);
  }
  std::sort(report.detected.begin(), report.detected.end(),
            [](const ScanDetection& a, const ScanDetection& b) { return a.angle < b.angle; });
  return report;
}

VanishingVerdict vanishing_check(const BoundedSeq& x, const CheckOptions& options) {
  VanishingVerdict v;
  v.tail = tail_norm(x, x.horizon() / 2);
  v.tol_vanish = options.tol_vanish.value_or(default_tol_vanish(x));
  v.vanishing = v.tail.tail_sup < v.tol_vanish;
  v.scan = spectrum_scan(x, options.grid_size, options.epsilon.value_or(default_epsilon(x)));
  v.scan_empty = v.scan.detected.empty();
  v.consistent = v.vanishing == v.scan_empty;
  return v;
}

SinglePointVerdict single_point_check(const BoundedSeq& x, Complex theta, const CheckOptions& options) {
  SinglePointVerdict v;
  v.theta = require_unimodular(theta, "single_point_check");
  const std::size_t n = x.horizon();
  const std::size_t start = n / 2;
  std::vector<double> diff_norms;
  std::vector<Complex> diff(x.dim());
  for (std::size_t i = start; i + 1 < n; ++i) {
    const auto now = x.at(i);
    const auto next = x.at(i + 1);
    for (std::size_t k = 0; k < x.dim(); ++k) diff[k] = next[k] - v.theta * now[k];
    diff_norms.push_back(span_norm(diff));
  }
  v.difference_tail = tail_stats(diff_norms, start, start);
  v.tol_vanish = options.tol_vanish.value_or(default_tol_vanish(x));
  v.difference_vanishing = v.difference_tail.tail_sup < v.tol_vanish;
  v.scan = spectrum_scan(x, options.grid_size, options.epsilon.value_or(default_epsilon(x)));
  const auto& det = v.scan.detected;
  v.scan_single_at_theta = det.size() == 1 && angular_distance(det.front().theta, v.theta) <= 1e-3;
  v.scan_within_theta = det.empty() || v.scan_single_at_theta;
  v.consistent = v.difference_vanishing == v.scan_within_theta;
  return v;
}

ModeDecomp extract_modes(const BoundedSeq& x, std::span<const Complex> thetas, std::size_t n_used, std::size_t first) {
  if (n_used < 2) throw PreconditionError("extract_modes: n_used must be at least 2");
  if (first + n_used > x.horizon()) throw PreconditionError("extract_modes: window exceeds the horizon");
  std::vector<Complex> units;
  for (const Complex t : thetas) units.push_back(require_unimodular(t, "extract_modes"));
  const double min_sep = 10.0 / static_cast<double>(n_used);
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      const double sep = angular_distance(units[i], units[j]);
      if (sep < min_sep) {
        throw PreconditionError("extract_modes: thetas " + std::to_string(i) + " and " + std::to_string(j) +
                                " are " + std::to_string(sep) + " rad apart, below the required 10/n_used = " +
                                std::to_string(min_sep));
      }
    }
  }

  ModeDecomp decomp;
  decomp.first = first;
  decomp.n_used = n_used;
  for (const Complex u : units) decomp.modes.push_back({u, rotated_mean(x, u, n_used, first).mean});

  const std::size_t window_start = first + n_used / 2;
  const std::size_t end = first + n_used;
  std::vector<PhaseStepper> phases;
  for (const Complex u : units) {
    phases.emplace_back(u);
    phases.back().advance(window_start);
  }
  std::vector<double> residual_norms;
  residual_norms.reserve(end - window_start);
  std::vector<Complex> r(x.dim());
  for (std::size_t n = window_start; n < end; ++n) {
    const auto xn = x.at(n);
    std::copy(xn.begin(), xn.end(), r.begin());
    for (std::size_t j = 0; j < units.size(); ++j) {
      const Complex p = phases[j].current();
      for (std::size_t k = 0; k < x.dim(); ++k) r[k] -= p * decomp.modes[j].v[k];
      phases[j].advance();
    }
    residual_norms.push_back(span_norm(r));
  }
  decomp.residual = tail_stats(residual_norms, window_start, window_start);
  return decomp;
}

KtzVerdict ktz_check(const CMatrix& t, Complex theta, std::size_t n_max, const KtzOptions& options) {
  KtzVerdict v;
  v.theta = require_unimodular(theta, "ktz_check");
  v.n_max = n_max;
  v.power = power_bounded_probe(t, n_max, std::numeric_limits<double>::infinity());
  v.power_bounded = v.power.growth.growth == GrowthClass::decaying || v.power.growth.growth == GrowthClass::bounded;
  if (!v.power_bounded) v.unmet.push_back(std::string("not power bounded (growth ") + to_string(v.power.growth.growth) + ")");

  const SpectrumInfo spec = spectrum_info(t, options.peripheral_tol);
  v.peripheral = spec.peripheral;
  v.peripheral_within_theta = std::all_of(spec.peripheral.begin(), spec.peripheral.end(),
                                          [&](Complex p) { return std::abs(p - v.theta) <= 1e-6; });
  if (!v.peripheral_within_theta) v.unmet.push_back("peripheral spectrum is not contained in {theta}");
  v.hypotheses_met = v.unmet.empty();
  if (!v.hypotheses_met) return v;

  // The powers T^0 .. T^n_max as a sequence over C^{d x d}.
  const std::size_t d = t.dim();
  std::vector<Complex> flat;
  flat.reserve((n_max + 1) * d * d);
  CMatrix power = CMatrix::identity(d);
  for (std::size_t n = 0; n <= n_max; ++n) {
    flat.insert(flat.end(), power.entries().begin(), power.entries().end());
    if (n < n_max) power = mat_mul(t, power);
  }
  const BoundedSeq powers(d * d, std::move(flat));

  v.difference_norms.resize(n_max);
  CMatrix diff(d);
  for (std::size_t n = 0; n < n_max; ++n) {
    const auto now = powers.at(n);
    const auto next = powers.at(n + 1);
    for (std::size_t i = 0; i < d * d; ++i) diff.data()[i] = next[i] - v.theta * now[i];
    v.difference_norms[n] = operator_norm(diff);
  }
  v.difference_tail = tail_stats(v.difference_norms, 0, n_max / 2);
  std::size_t settled = n_max;
  while (settled > 0 && v.difference_norms[settled - 1] <= options.limit_tol) --settled;
  if (settled < n_max) v.settled_from = settled;
  v.limit_attained = v.difference_tail.tail_sup <= options.limit_tol;
  return v;
}

}  // namespace seqspec
