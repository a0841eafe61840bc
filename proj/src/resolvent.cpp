#include "seqspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "seqspec/eigen.hpp"
#include "seqspec/errors.hpp"
#include "seqspec/kernels.hpp"

namespace seqspec {
namespace {

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << z.real() << ", " << z.imag() << ')';
  return os.str();
}

void require_unitary(const CMatrix& u, const char* op) {
  const double defect = unitarity_defect(u);
  if (!(defect <= kUnitaryTol)) {
    throw PreconditionError(std::string(op) + ": matrix is not unitary (||U^H U - I|| = " + std::to_string(defect) + ")");
  }
}

}  // namespace

CMatrix resolvent_direct(const CMatrix& a, Complex lambda) {
  CMatrix shifted = -1.0 * a;
  shifted.add_identity(lambda);
  try {
    return inverse(shifted);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("lambda = " + format_complex(lambda) + " is numerically in the spectrum: " + e.what(),
                              e.pivot_row(), e.pivot_magnitude());
  }
}

double resolvent_norm(const CMatrix& a, Complex lambda) { return operator_norm(resolvent_direct(a, lambda)); }

NeumannResult resolvent_neumann(const CMatrix& a, Complex lambda, std::size_t k_max) {
  if (k_max < 1) throw PreconditionError("resolvent_neumann: k_max must be at least 1");
  if (lambda == Complex{}) throw PreconditionError("resolvent_neumann: lambda must be nonzero");
  const std::size_t n = a.dim();
  const Complex inv_lambda = 1.0 / lambda;

  CMatrix term = CMatrix::identity(n);
  term *= inv_lambda;
  CMatrix sum = term;
  std::vector<double> tail_norms;
  constexpr std::size_t kWatch = 10;
  const std::size_t watch_from = k_max + 1 > kWatch ? k_max + 1 - kWatch : 0;
  if (watch_from == 0) tail_norms.push_back(operator_norm(term));
  for (std::size_t k = 1; k <= k_max; ++k) {
    term = mat_mul(a, term);
    term *= inv_lambda;
    sum += term;
    if (k >= watch_from) tail_norms.push_back(operator_norm(term));
  }
  const double last = k_max >= watch_from ? tail_norms.back() : operator_norm(term);
  if (tail_norms.size() == kWatch && last > 0.0 &&
      std::is_sorted(tail_norms.begin(), tail_norms.end())) {
    throw DivergenceError("resolvent_neumann: term norms did not decrease over the last 10 terms; |lambda| <= rho(A)",
                          tail_norms);
  }
  return {std::move(sum), last};
}

namespace {

// e^{2 pi i j / M} for j < M, built from the first quarter turn so that the
// reflections ω^{M-j} = conj(ω^j) and ω^{j+M/4} = i ω^j hold exactly.
std::vector<Complex> unit_roots(std::size_t m) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto direct = [&](std::size_t j) { return std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(m)); };
  std::vector<Complex> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t jj = std::min(j, m - j);
    Complex base;
    if (m % 4 == 0 && jj > m / 4) {
      const Complex r = direct(jj - m / 4);
      base = {-r.imag(), r.real()};
    } else {
      base = direct(jj);
    }
    w[j] = j <= m / 2 ? base : std::conj(base);
  }
  return w;
}

}  // namespace

CVector cauchy_coefficient(const VectorOracle& f, std::size_t k, double radius, std::size_t nodes) {
  if (nodes < 4) throw PreconditionError("cauchy_coefficient: at least 4 nodes are required");
  if (!(radius > 0.0)) throw PreconditionError("cauchy_coefficient: radius must be positive");
  const std::vector<Complex> w = unit_roots(nodes);
  CVector acc;
  for (std::size_t m = 0; m < nodes; ++m) {
    const CVector value = f(radius * w[m]);
    if (m == 0) acc = CVector(value.dim());
    if (value.dim() != acc.dim()) throw PreconditionError("cauchy_coefficient: oracle changed its output dimension");
    // Unimodular weight with the angle reduced exactly modulo the node count;
    // radius^{-k} is applied once at the end.
    const std::size_t turn = (m * k) % nodes;
    kernels::active().axpy(acc.dim(), std::conj(w[turn]), value.data(), acc.data());
  }
  acc *= std::pow(radius, -static_cast<double>(k)) / static_cast<double>(nodes);
  return acc;
}

std::vector<ResolventSample> resolvent_norm_scan(const CMatrix& a, std::span<const Complex> grid) {
  std::vector<ResolventSample> out;
  out.reserve(grid.size());
  for (const Complex lambda : grid) {
    ResolventSample s{lambda, std::numeric_limits<double>::infinity(), true};
    try {
      s.resolvent_norm = resolvent_norm(a, lambda);
      s.singular = !(s.resolvent_norm <= kSingularNormThreshold);
    } catch (const SingularMatrixError&) {
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Complex> circle_grid(Complex center, double radius, std::size_t count) {
  std::vector<Complex> g(count);
  for (std::size_t m = 0; m < count; ++m)
    g[m] = center + std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(count));
  return g;
}

std::vector<Complex> rect_grid(double re_min, double re_max, double im_min, double im_max, std::size_t nx,
                               std::size_t ny) {
  if (nx < 1 || ny < 1) throw PreconditionError("rect_grid: nx and ny must be positive");
  std::vector<Complex> g;
  g.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double im = ny == 1 ? im_min : im_min + (im_max - im_min) * static_cast<double>(iy) / static_cast<double>(ny - 1);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double re =
          nx == 1 ? re_min : re_min + (re_max - re_min) * static_cast<double>(ix) / static_cast<double>(nx - 1);
      g.emplace_back(re, im);
    }
  }
  return g;
}

IsometryBoundReport isometry_bound_check(const CMatrix& u, std::span<const Complex> samples) {
  require_unitary(u, "isometry_bound_check");
  for (const Complex lambda : samples) {
    if (!(std::abs(std::abs(lambda) - 1.0) >= 1e-6))
      throw PreconditionError("isometry_bound_check: sample " + format_complex(lambda) + " lies within 1e-6 of the unit circle");
  }
  IsometryBoundReport report;
  report.samples = samples.size();
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (const Complex lambda : samples) {
    const double bound = 1.0 / std::abs(std::abs(lambda) - 1.0);
    const double norm = resolvent_norm(u, lambda);
    const double slack = bound - norm;
    if (norm > bound + 1e-9) ++report.violations;
    if (slack < report.worst_slack) {
      report.worst_slack = slack;
      report.worst_lambda = lambda;
    }
  }
  if (samples.empty()) report.worst_slack = 0.0;
  report.passed = report.violations == 0;
  return report;
}

PoleProbeReport pole_order_probe(const CMatrix& u, Complex theta, std::span<const double> radii) {
  require_unitary(u, "pole_order_probe");
  if (radii.size() < 4) throw PreconditionError("pole_order_probe: at least 4 radii are required");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 1e-8 && radii[i] <= 0.1)) throw PreconditionError("pole_order_probe: radii must lie in [1e-8, 0.1]");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw PreconditionError("pole_order_probe: radii must be strictly decreasing");
  }
  const double r_max = radii.front();
  double nearest = std::numeric_limits<double>::infinity();
  double nearest_other = std::numeric_limits<double>::infinity();
  constexpr double kSameEigenvalue = 1e-6;
  for (const Complex mu : eigenvalues(u)) {
    const double dist = std::abs(mu - theta);
    nearest = std::min(nearest, dist);
    if (dist > kSameEigenvalue) nearest_other = std::min(nearest_other, dist);
  }
  if (!(nearest <= kSameEigenvalue))
    throw PreconditionError("pole_order_probe: theta " + format_complex(theta) + " is not an eigenvalue (nearest at distance " +
                            std::to_string(nearest) + ")");
  if (!(nearest_other >= 2.0 * r_max))
    throw PreconditionError("pole_order_probe: theta is not isolated by 2*max(radii) from the rest of the spectrum");

  PoleProbeReport report;
  report.center = theta;
  report.radii.assign(radii.begin(), radii.end());
  const Complex direction = std::polar(1.0, std::numbers::pi / 4.0);
  std::vector<double> x, y;
  for (const double r : radii) {
    const double norm = resolvent_norm(u, theta + r * direction);
    report.norms.push_back(norm);
    x.push_back(-std::log(r));
    y.push_back(std::log(norm));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  report.fitted_order = sxy / sxx;
  return report;
}

}  // namespace seqspec
