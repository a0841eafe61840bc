#include "seqspec/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seqspec/errors.hpp"

namespace seqspec {
namespace {

constexpr int kMaxSweeps = 500;
constexpr double kRootStepTol = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerValue {
  Complex p;
  Complex dp;
  double bound;  // sum |c_k| |z|^k, scale of the evaluation rounding error
};

HornerValue horner(const std::vector<Complex>& c, Complex z) {
  const double az = std::abs(z);
  Complex p = c.back();
  Complex dp{};
  double bound = std::abs(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
    bound = bound * az + std::abs(c[k]);
  }
  return {p, dp, bound};
}

double rounding_bound(const std::vector<Complex>& c, double bound) {
  return 2.0 * static_cast<double>(c.size()) * kEps * bound;
}

// Newton iteration on the (m-1)-th derivative, where an m-fold root is simple.
Complex refine_multiple_root(const std::vector<Complex>& c, std::size_t multiplicity, Complex start) {
  Polynomial q{c};
  for (std::size_t i = 1; i < multiplicity; ++i) q = q.derivative();
  const Polynomial dq = q.derivative();
  Complex z = start;
  for (int it = 0; it < 20; ++it) {
    const Complex f = q(z);
    const Complex df = dq(z);
    if (df == Complex{}) break;
    const Complex step = f / df;
    z -= step;
    if (std::abs(step) <= kEps * (1.0 + std::abs(z))) break;
  }
  return z;
}

// Groups roots whose single-linkage distance is below `radius(z)`.
template <class Radius>
std::vector<std::vector<std::size_t>> single_linkage(std::span<const Complex> points, Radius radius) {
  std::vector<int> label(points.size(), -1);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = static_cast<int>(clusters.size());
    clusters.push_back({i});
    for (std::size_t head = 0; head < clusters.back().size(); ++head) {
      const std::size_t a = clusters.back()[head];
      for (std::size_t b = 0; b < points.size(); ++b) {
        if (label[b] >= 0) continue;
        if (std::abs(points[a] - points[b]) < radius(points[a])) {
          label[b] = label[i];
          clusters.back().push_back(b);
        }
      }
    }
  }
  return clusters;
}

void snap_multiple_roots(const std::vector<Complex>& c, std::vector<Complex>& roots) {
  const auto clusters = single_linkage(roots, [](Complex z) { return 1e-4 * (1.0 + std::abs(z)); });
  for (const auto& members : clusters) {
    if (members.size() < 2) continue;
    Complex centroid{};
    for (std::size_t i : members) centroid += roots[i];
    centroid /= static_cast<double>(members.size());
    const HornerValue at_centroid = horner(c, centroid);
    // Distinct close roots leave a residual well above rounding at their midpoint.
    if (std::abs(at_centroid.p) > 100.0 * rounding_bound(c, at_centroid.bound)) continue;
    Complex snapped = refine_multiple_root(c, members.size(), centroid);
    const HornerValue at_snapped = horner(c, snapped);
    if (std::abs(snapped - centroid) > 1e-4 * (1.0 + std::abs(centroid)) ||
        std::abs(at_snapped.p) > 100.0 * rounding_bound(c, at_snapped.bound)) {
      snapped = centroid;
    }
    for (std::size_t i : members) roots[i] = snapped;
  }
}

double angle_0_2pi(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

Complex Polynomial::operator()(Complex t) const noexcept {
  Complex p{};
  for (std::size_t k = coeffs.size(); k-- > 0;) p = p * t + coeffs[k];
  return p;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  if (coeffs.size() <= 1) {
    d.coeffs = {Complex{}};
    return d;
  }
  d.coeffs.resize(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs[k - 1] = coeffs[k] * static_cast<double>(k);
  return d;
}

Polynomial poly_from_roots(std::span<const Complex> roots) {
  Polynomial p{{Complex{1.0, 0.0}}};
  for (const Complex r : roots) {
    std::vector<Complex> next(p.coeffs.size() + 1);
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      next[k + 1] += p.coeffs[k];
      next[k] -= r * p.coeffs[k];
    }
    p.coeffs = std::move(next);
  }
  return p;
}

Polynomial char_poly(const CMatrix& a) {
  const std::size_t n = a.dim();
  Polynomial p;
  p.coeffs.assign(n + 1, Complex{});
  p.coeffs[n] = 1.0;
  CMatrix a_m(n);  // A * M_{k-1}; M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    CMatrix m = a_m;
    m.add_identity(p.coeffs[n - k + 1]);
    a_m = mat_mul(a, m);
    p.coeffs[n - k] = -a_m.trace() / static_cast<double>(k);
  }
  return p;
}

std::vector<Complex> poly_roots(const Polynomial& p) {
  if (p.coeffs.size() < 2) throw PreconditionError("poly_roots: degree must be at least 1");
  const Complex lead = p.coeffs.back();
  if (lead == Complex{}) throw PreconditionError("poly_roots: leading coefficient is zero");

  std::vector<Complex> c(p.coeffs.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = p.coeffs[k] / lead;

  std::vector<Complex> roots;
  std::size_t zeros = 0;
  while (zeros + 1 < c.size() && c[zeros] == Complex{}) ++zeros;
  roots.assign(zeros, Complex{});
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));

  const std::size_t deg = c.size() - 1;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  double max_coeff = 0.0;
  for (std::size_t k = 0; k < deg; ++k) max_coeff = std::max(max_coeff, std::abs(c[k]));
  const double radius = 1.0 + max_coeff;

  std::vector<Complex> z(deg);
  for (std::size_t j = 0; j < deg; ++j)
    z[j] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(deg) + 0.4);

  std::vector<bool> settled(deg, false);
  std::size_t remaining = deg;
  for (int sweep = 0; sweep < kMaxSweeps && remaining > 0; ++sweep) {
    for (std::size_t j = 0; j < deg; ++j) {
      if (settled[j]) continue;
      const HornerValue h = horner(c, z[j]);
      if (std::abs(h.p) <= rounding_bound(c, h.bound)) {
        settled[j] = true;
        --remaining;
        continue;
      }
      Complex repulsion{};
      for (std::size_t k = 0; k < deg; ++k) {
        if (k != j && z[j] != z[k]) repulsion += 1.0 / (z[j] - z[k]);
      }
      Complex denom = h.dp - h.p * repulsion;
      if (denom == Complex{}) denom = Complex{kEps, kEps};
      const Complex w = h.p / denom;
      z[j] -= w;
      if (std::abs(w) < kRootStepTol * (1.0 + std::abs(z[j]))) {
        settled[j] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) {
    std::vector<double> residuals(deg);
    for (std::size_t j = 0; j < deg; ++j) residuals[j] = std::abs(horner(c, z[j]).p);
    throw NumericalFailure("poly_roots: Aberth iteration did not converge in 500 sweeps", std::move(residuals));
  }

  snap_multiple_roots(c, z);
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<Complex> eigenvalues(const CMatrix& a) { return poly_roots(char_poly(a)); }

SpectrumInfo spectrum_info(const CMatrix& a, double peripheral_tol) {
  if (!(peripheral_tol > 0.0 && peripheral_tol <= 0.1))
    throw PreconditionError("spectrum_info: peripheral_tol must lie in (0, 0.1]");
  SpectrumInfo info;
  info.peripheral_tol = peripheral_tol;
  info.eigenvalues = eigenvalues(a);
  for (const Complex& l : info.eigenvalues) info.spectral_radius = std::max(info.spectral_radius, std::abs(l));

  std::vector<Complex> near_circle;
  for (const Complex& l : info.eigenvalues) {
    if (std::abs(std::abs(l) - 1.0) <= peripheral_tol) near_circle.push_back(l);
  }
  const auto clusters = single_linkage(near_circle, [&](Complex) { return 10.0 * peripheral_tol; });
  for (const auto& members : clusters) {
    Complex sum{};
    for (std::size_t i : members) sum += near_circle[i] / std::abs(near_circle[i]);
    info.peripheral.push_back(sum / std::abs(sum));
  }
  std::sort(info.peripheral.begin(), info.peripheral.end(),
            [](Complex x, Complex y) { return angle_0_2pi(x) < angle_0_2pi(y); });
  return info;
}

double cayley_hamilton_residual(const CMatrix& a) {
  const Polynomial chi = char_poly(a);
  const std::size_t n = a.dim();
  CMatrix r(n);
  r.add_identity(chi.coeffs[n]);
  for (std::size_t k = n; k-- > 0;) {
    r = mat_mul(r, a);
    r.add_identity(chi.coeffs[k]);
  }
  return operator_norm(r);
}

const char* to_string(GrowthClass c) noexcept {
  switch (c) {
    case GrowthClass::decaying:
      return "decaying";
    case GrowthClass::bounded:
      return "bounded";
    case GrowthClass::polynomial_suspect:
      return "polynomial-suspect";
    case GrowthClass::exponential_suspect:
      return "exponential-suspect";
  }
  return "unknown";
}

GrowthClass growth_class_from_string(const std::string& s) {
  for (GrowthClass c : {GrowthClass::decaying, GrowthClass::bounded, GrowthClass::polynomial_suspect,
                        GrowthClass::exponential_suspect}) {
    if (s == to_string(c)) return c;
  }
  throw PreconditionError("unknown growth class '" + s + "'");
}

GrowthFit classify_growth(std::span<const LogMagnitude> values, std::size_t first_index) {
  GrowthFit fit;
  const std::size_t start = values.size() / 2;
  const std::size_t width = values.size() - start;
  if (width == 0) return fit;
  const std::size_t blocks = std::min<std::size_t>(8, width);

  std::vector<double> x, y;
  std::vector<bool> in_late;
  bool last_block_zero = false;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = start + b * width / blocks;
    const std::size_t hi = start + (b + 1) * width / blocks;
    bool any = false;
    double best = 0.0;
    std::size_t best_index = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      if (values[i].is_zero()) continue;
      if (!any || values[i].log() > best) {
        best = values[i].log();
        best_index = i;
        any = true;
      }
    }
    if (b + 1 == blocks) last_block_zero = !any;
    if (!any) continue;
    x.push_back(std::log(std::max<double>(1.0, static_cast<double>(first_index + best_index))));
    y.push_back(best);
    in_late.push_back(2 * b >= blocks);
  }
  if (last_block_zero) {
    fit.growth = GrowthClass::decaying;
    fit.vanished = true;
    return fit;
  }
  fit.slope = ls_slope(x, y);
  std::vector<double> xe, ye, xl, yl;
  for (std::size_t i = 0; i < x.size(); ++i) {
    (in_late[i] ? xl : xe).push_back(x[i]);
    (in_late[i] ? yl : ye).push_back(y[i]);
  }
  fit.early_slope = xe.size() >= 2 ? ls_slope(xe, ye) : fit.slope;
  fit.late_slope = xl.size() >= 2 ? ls_slope(xl, yl) : fit.slope;

  if (fit.slope < -0.05) {
    fit.growth = GrowthClass::decaying;
  } else if (fit.slope > 0.05) {
    const bool accelerating = fit.early_slope > 0.05 && fit.late_slope > 1.2 * fit.early_slope;
    fit.growth = accelerating ? GrowthClass::exponential_suspect : GrowthClass::polynomial_suspect;
  } else {
    fit.growth = GrowthClass::bounded;
  }
  return fit;
}

PowerBoundVerdict power_bounded_probe(const CMatrix& a, std::size_t n_max, double bound) {
  if (n_max < 8) throw PreconditionError("power_bounded_probe: n_max must be at least 8");
  const auto powers = mat_power_seq(a, n_max);
  std::vector<LogMagnitude> logs;
  logs.reserve(powers.size());
  PowerBoundVerdict v;
  v.n_max = n_max;
  for (const auto& p : powers) {
    logs.push_back(p.log_norm);
    if (!p.log_norm.is_zero() && (v.sup_norm.is_zero() || p.log_norm.log() > v.sup_norm.log())) v.sup_norm = p.log_norm;
  }
  if (v.sup_norm.is_zero()) {
    v.within_bound = bound >= 0.0;
  } else {
    v.within_bound = bound > 0.0 && v.sup_norm.log() <= std::log(bound);
  }
  v.growth = classify_growth(logs, 1);
  return v;
}

GelfandReport gelfand_radius_estimate(const CMatrix& a, std::size_t n_max) {
  if (n_max < 16) throw PreconditionError("gelfand_radius_estimate: n_max must be at least 16");
  GelfandReport report;
  const auto powers = mat_power_seq(a, n_max);
  double tail_min = std::numeric_limits<double>::infinity();
  for (const auto& p : powers) {
    if (p.log_norm.is_zero()) {
      report.nilpotent = true;
      report.samples.push_back({p.n, LogMagnitude::zero()});
      continue;
    }
    const double rate = p.log_norm.log() / static_cast<double>(p.n);
    report.samples.push_back({p.n, LogMagnitude::from_log(rate)});
    if (2 * p.n >= n_max) tail_min = std::min(tail_min, rate);
  }
  report.estimate = report.nilpotent ? 0.0 : std::exp(tail_min);
  for (const Complex& l : eigenvalues(a)) report.eig_radius = std::max(report.eig_radius, std::abs(l));
  report.discrepancy = std::abs(report.estimate - report.eig_radius);
  return report;
}

}  // namespace seqspec
