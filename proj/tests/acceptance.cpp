// One PASS/FAIL line per acceptance criterion. Every criterion also writes a
// JSON report to --work-dir; the last criterion regenerates all of them and
// compares bytes.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "seqspec/cli.hpp"
#include "seqspec/corpus.hpp"
#include "seqspec/dynamics.hpp"
#include "seqspec/eigen.hpp"
#include "seqspec/io.hpp"
#include "seqspec/resolvent.hpp"
#include "seqspec/sequence.hpp"

namespace {

using namespace seqspec;
using io::Json;
namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string summary;
  Json report;  // deterministic: no timings
  double seconds = 0.0;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome cayley_hamilton() {
  Outcome o;
  o.passed = true;
  double worst_ratio = 0.0;
  Json cases = Json::array();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t d = 2 + seed % 5;
    const CMatrix a = random_disk_matrix(d, seed);
    const double residual = cayley_hamilton_residual(a);
    const double bound = 1e-8 * std::pow(1.0 + operator_norm(a), static_cast<double>(d));
    worst_ratio = std::max(worst_ratio, residual / bound);
    o.passed = o.passed && residual <= bound;
    cases.push_back({{"seed", seed}, {"d", d}, {"residual", residual}, {"bound", bound}});
  }
  o.summary = "100 matrices, worst residual/bound " + fmt(worst_ratio);
  o.report = {{"cases", cases}, {"worst_ratio", worst_ratio}};
  return o;
}

Outcome gelfand() {
  Outcome o;
  o.passed = true;
  double worst = 0.0;
  Json cases = Json::array();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t d = 2 + seed % 5;
    std::vector<Complex> eig;
    const CMatrix a = random_diagonalizable(d, 500 + seed, 10.0, &eig);
    double rho = 0.0;
    for (const Complex z : eig) rho = std::max(rho, std::abs(z));
    const GelfandReport g = gelfand_radius_estimate(a, 512);
    const double err = std::abs(g.estimate - rho) / (1.0 + rho);
    worst = std::max(worst, err);
    o.passed = o.passed && err <= 0.05;
    cases.push_back({{"seed", 500 + seed}, {"planted_radius", rho}, {"estimate", g.estimate}});
  }
  o.summary = "50 matrices, worst |estimate - rho|/(1 + rho) " + fmt(worst);
  o.report = {{"cases", cases}, {"worst_scaled_error", worst}};
  return o;
}

Outcome resolvent_consistency() {
  Outcome o;
  o.passed = true;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst_neumann = 0.0, worst_identity = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t d = 2 + seed % 5;
    const CMatrix a = random_disk_matrix(d, 3000 + seed);
    const double rho = spectrum_info(a).spectral_radius;
    const Complex lambda = std::polar(2.0 * rho + 0.1, angle(rng));
    const CMatrix direct = resolvent_direct(a, lambda);
    const double neumann_err = operator_norm(resolvent_neumann(a, lambda, 200).sum - direct);
    worst_neumann = std::max(worst_neumann, neumann_err);

    const Complex mu = std::polar(2.0 * rho + 0.7, angle(rng));
    const CMatrix rm = resolvent_direct(a, mu);
    const double scale = 1.0 + std::abs(mu - lambda) * operator_norm(direct) * operator_norm(rm);
    const double identity_err = operator_norm(direct - rm - (mu - lambda) * mat_mul(direct, rm)) / scale;
    worst_identity = std::max(worst_identity, identity_err);
    o.passed = o.passed && neumann_err <= 1e-8 && identity_err <= 1e-9;
  }
  o.summary = "50 matrices, worst Neumann gap " + fmt(worst_neumann) + ", worst scaled identity defect " +
              fmt(worst_identity);
  o.report = {{"worst_neumann_gap", worst_neumann}, {"worst_identity_defect", worst_identity}};
  return o;
}

Outcome cauchy_recovery() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::normal_distribution<double> g;
  double worst_planted = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t degree = static_cast<std::size_t>(trial) + 1;
    std::vector<CVector> coeffs;
    for (std::size_t j = 0; j <= degree; ++j) coeffs.push_back(CVector{{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}});
    const VectorOracle f = [&coeffs](Complex z) {
      CVector acc = coeffs.back();
      for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        acc *= z;
        acc += coeffs[i];
      }
      return acc;
    };
    for (std::size_t k = 0; k <= 10; ++k) {
      const CVector want = k <= degree ? coeffs[k] : CVector(3);
      worst_planted = std::max(worst_planted, (cauchy_coefficient(f, k, 1.0, 64) - want).norm());
    }
  }
  const CVector c{Complex{1.5, -0.5}, 2.0};
  const VectorOracle constant = [&c](Complex) { return c; };
  double worst_constant = 0.0;
  for (double radius : {0.5, 1.0, 2.0})
    for (std::size_t k = 1; k <= 10; ++k)
      worst_constant = std::max(worst_constant, cauchy_coefficient(constant, k, radius, 64).norm());
  o.passed = worst_planted <= 1e-12 && worst_constant <= 1e-13;
  o.summary = "planted series worst error " + fmt(worst_planted) + ", constant oracle worst |c_k| " + fmt(worst_constant);
  o.report = {{"worst_planted_error", worst_planted}, {"worst_constant_coefficient", worst_constant}};
  return o;
}

Outcome isometry_bound() {
  Outcome o;
  o.passed = true;
  std::size_t violations = 0, probes = 0;
  double worst_order_gap = 0.0;
  Json orders = Json::array();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> radius(0.2, 3.0), angle(0.0, 2.0 * std::numbers::pi);
  const std::vector<double> radii{1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix u = random_unitary(2 + seed % 5, 5000 + seed);
    std::vector<Complex> samples;
    while (samples.size() < 1000) {
      const double r = radius(rng);
      if (std::abs(r - 1.0) < 1e-3) continue;
      samples.push_back(std::polar(r, angle(rng)));
    }
    const IsometryBoundReport rep = isometry_bound_check(u, samples);
    violations += rep.violations;
    o.passed = o.passed && rep.passed;

    const auto eig = eigenvalues(u);
    for (std::size_t i = 0; i < eig.size(); ++i) {
      double gap = 1e300;
      for (std::size_t j = 0; j < eig.size(); ++j)
        if (j != i) gap = std::min(gap, std::abs(eig[i] - eig[j]));
      if (gap < 0.1) continue;  // not isolated at the probe radii
      const PoleProbeReport p = pole_order_probe(u, eig[i] / std::abs(eig[i]), radii);
      ++probes;
      worst_order_gap = std::max(worst_order_gap, std::abs(p.fitted_order - 1.0));
      o.passed = o.passed && p.fitted_order >= 0.9 && p.fitted_order <= 1.1;
      orders.push_back(p.fitted_order);
    }
  }
  o.summary = "20 unitaries x 1000 points, " + std::to_string(violations) + " violation(s); " + std::to_string(probes) +
              " isolated eigenvalues, worst |order - 1| " + fmt(worst_order_gap);
  o.report = {{"violations", violations}, {"fitted_orders", orders}};
  return o;
}

Outcome corpus_consistency() {
  Outcome o;
  o.passed = true;
  std::size_t agree = 0;
  Json members = Json::array();
  const auto corpus = sequence_corpus(20240611, 16384, 30);
  for (const auto& m : corpus) {
    const BoundedSeq x = BoundedSeq::generate(m.spec);
    const VanishingVerdict v1 = vanishing_check(x, {4096});
    bool ok = v1.consistent && v1.vanishing == m.expect_vanishing;
    Json entry{{"name", m.name}, {"vanishing", v1.vanishing}, {"scan_points", v1.scan.detected.size()}};
    if (!m.spec.modes.empty()) {
      const Complex theta = m.single_theta.value_or(m.spec.modes.front().theta);
      const SinglePointVerdict v3 = single_point_check(x, theta, {4096});
      ok = ok && v3.consistent && v3.difference_vanishing == m.single_theta.has_value();
      entry["difference_vanishing"] = v3.difference_vanishing;
    }
    entry["agree"] = ok;
    agree += ok ? 1 : 0;
    o.passed = o.passed && ok;
    members.push_back(std::move(entry));
  }
  o.summary = std::to_string(agree) + "/" + std::to_string(corpus.size()) + " members with agreeing verdicts";
  o.report = {{"members", members}};
  return o;
}

Outcome mode_recovery() {
  Outcome o;
  o.passed = true;
  double worst_short = 0.0, worst_long = 0.0;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Json cases = Json::array();
  for (std::size_t k = 1; k <= 4; ++k) {
    for (DecayType decay : {DecayType::geometric, DecayType::power}) {
      std::vector<Complex> thetas;
      while (thetas.size() < k) {
        const Complex z = std::polar(1.0, angle(rng));
        bool separated = true;
        for (const Complex w : thetas) separated = separated && angular_distance(z, w) >= 0.1;
        if (separated) thetas.push_back(z);
      }
      ModesPlusDecay spec;
      spec.dim = 2;
      spec.horizon = 40000;
      spec.decay = {decay, decay == DecayType::geometric ? 0.8 : 1.0};
      spec.seed = 7000 + k;
      for (const Complex t : thetas) spec.modes.push_back({t, random_unit_vector(2, rng())});
      const BoundedSeq x = BoundedSeq::generate(spec);
      double err_short = 0.0, err_long = 0.0;
      const ModeDecomp a = extract_modes(x, thetas, 10000);
      const ModeDecomp b = extract_modes(x, thetas, 40000);
      for (std::size_t j = 0; j < k; ++j) {
        err_short = std::max(err_short, (a.modes[j].v - spec.modes[j].v).norm());
        err_long = std::max(err_long, (b.modes[j].v - spec.modes[j].v).norm());
      }
      worst_short = std::max(worst_short, err_short);
      worst_long = std::max(worst_long, err_long);
      o.passed = o.passed && err_short <= 1e-2 && err_long <= 2.5e-3;
      cases.push_back({{"k", k}, {"decay", to_string(decay)}, {"error_1e4", err_short}, {"error_4e4", err_long}});
    }
  }
  o.summary = "8 planted cases, worst error " + fmt(worst_short) + " at 1e4, " + fmt(worst_long) + " at 4e4";
  o.report = {{"cases", cases}};
  return o;
}

Outcome mode_limit() {
  Outcome o;
  o.passed = true;
  struct Case {
    const char* name;
    std::vector<Complex> diag;
    ForcingSpec forcing;
  };
  std::vector<Case> cases{
      {"peripheral {-1}", {-1.0, 0.5, 0.3}, {ForcingKind::geometric, 0.5}},
      {"peripheral {1}", {1.0, 0.6}, {ForcingKind::geometric, 0.7}},
      {"peripheral {1,-1}", {1.0, -1.0, 0.5}, {ForcingKind::geometric, 0.5}},
      {"peripheral empty", {0.9, 0.5}, {ForcingKind::power, 2.0}},
  };
  Json out = Json::array();
  std::string detail;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto& c = cases[i];
    const std::size_t d = c.diag.size();
    const CMatrix q = random_unitary(d, 8000 + i);
    const CMatrix b = mat_mul(q, mat_mul(CMatrix::diagonal(c.diag), q.adjoint()));
    c.forcing.seed = 8100 + i;
    const Trajectory t = simulate_forced(b, random_unit_vector(d, 8200 + i), c.forcing, 16384);
    const ModeLimitVerdict v = mode_limit_check(b, t.values);
    const bool limit_expected = v.peripheral.empty() || (v.peripheral.size() == 1 && std::abs(v.peripheral[0] - 1.0) < 1e-8);
    const bool ok = v.residual_ok && (!limit_expected || (v.limit_test_applicable && v.limit_exists));
    o.passed = o.passed && ok;
    detail += std::string(i ? "; " : "") + c.name + " residual " + fmt(v.decomposition.residual.tail_sup);
    out.push_back({{"case", c.name}, {"verdict", io::to_json(v)}});
  }
  o.summary = detail;
  o.report = {{"cases", out}};
  return o;
}

Outcome iterate_differences() {
  Outcome o;
  o.passed = true;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), modulus(0.0, 0.9);
  Json cases = Json::array();
  std::size_t latest_settle = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = 2 + seed % 4;
    const Complex theta = std::polar(1.0, angle(rng));
    std::vector<Complex> diag{theta};
    for (std::size_t j = 1; j < d; ++j) diag.push_back(std::polar(modulus(rng), angle(rng)));
    // V = unitary * diag(s) with s in [1, sqrt(10)], so cond(V) <= 10.
    CMatrix v = random_unitary(d, 9000 + seed);
    std::uniform_real_distribution<double> s(1.0, std::sqrt(10.0));
    for (std::size_t col = 0; col < d; ++col) {
      const double scale = s(rng);
      for (std::size_t row = 0; row < d; ++row) v(row, col) *= scale;
    }
    const CMatrix t = mat_mul(v, mat_mul(CMatrix::diagonal(diag), inverse(v)));
    const KtzVerdict k = ktz_check(t, theta, 400);
    const bool ok = k.hypotheses_met && k.settled_from.has_value();
    if (k.settled_from) latest_settle = std::max(latest_settle, *k.settled_from);
    o.passed = o.passed && ok;
    cases.push_back({{"seed", 9000 + seed},
                     {"hypotheses_met", k.hypotheses_met},
                     {"settled_from", k.settled_from ? Json(*k.settled_from) : Json(nullptr)}});
  }
  const KtzVerdict jordan = ktz_check(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, 1.0, 400);
  o.passed = o.passed && !jordan.hypotheses_met;
  o.summary = "20 matrices settle below 1e-8 by n = " + std::to_string(latest_settle) +
              "; Jordan block hypotheses met: " + (jordan.hypotheses_met ? "yes" : "no");
  o.report = {{"cases", cases}, {"jordan", io::to_json(jordan)}};
  return o;
}

Outcome delay_discrepancy() {
  Outcome o;
  o.passed = true;
  const DelaySystem s{CMatrix::identity(1), 2, {CVector{1.0}, CVector{-1.0}}, {}};
  std::vector<std::size_t> horizons;
  for (std::size_t n = 16; n <= 128; ++n) horizons.push_back(n);
  for (std::size_t n : {255, 256, 1000, 4096, 16384}) horizons.push_back(n);
  double worst_one = 0.0, worst_p = 0.0;
  for (const std::size_t n : horizons) {
    const DelayProbeReport r = delay_probe(s, n);
    worst_one = std::max(worst_one, std::abs(r.one_step.tail_sup - 2.0));
    worst_p = std::max(worst_p, r.p_step.tail_sup);
    o.passed = o.passed && r.hypotheses_met && std::abs(r.one_step.tail_sup - 2.0) <= 1e-12 && r.p_step.tail_sup <= 1e-12;
  }
  o.summary = std::to_string(horizons.size()) + " horizons from 16 to 16384, max |one-step - 2| " + fmt(worst_one) +
              ", max p-step " + fmt(worst_p);
  o.report = {{"horizons", horizons}, {"one_step_deviation", worst_one}, {"p_step_max", worst_p},
              {"probe_16384", io::to_json(delay_probe(s, 16384))}};
  return o;
}

struct Criterion {
  int number;
  const char* title;
  std::function<Outcome()> run;
  double time_limit;  // seconds; <= 0 for none
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "Cayley-Hamilton residual", cayley_hamilton, 1.0},
      {2, "spectral radius from power norms", gelfand, 5.0},
      {3, "Neumann series vs direct resolvent", resolvent_consistency, 0.0},
      {4, "contour coefficient recovery", cauchy_recovery, 0.0},
      {5, "unitary resolvent bound and simple poles", isometry_bound, 0.0},
      {6, "tail verdicts vs spectrum scan on corpus", corpus_consistency, 0.0},
      {7, "planted mode recovery", mode_recovery, 10.0},
      {8, "mode limit of bounded trajectories", mode_limit, 0.0},
      {9, "iterate differences of power-bounded matrices", iterate_differences, 0.0},
      {10, "delay equation difference statistics", delay_discrepancy, 0.0},
  };
  return all;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run"};
  std::string work_dir = "acceptance_work";
  app.add_option("--work-dir", work_dir, "Directory for report files");
  CLI11_PARSE(app, argc, argv);

  const fs::path first = fs::path(work_dir) / "first", second = fs::path(work_dir) / "repeat";
  fs::remove_all(work_dir);
  fs::create_directories(first);
  fs::create_directories(second);

  bool all_passed = true;
  auto line = [&](int n, bool passed, const std::string& title, const std::string& summary) {
    all_passed = all_passed && passed;
    std::cout << (passed ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " -- " << summary << std::endl;
  };

  std::vector<std::string> files;
  for (const auto& c : criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    o.seconds = seconds_since(t0);
    const bool in_time = c.time_limit <= 0.0 || o.seconds < c.time_limit;
    std::string summary = o.summary + " (" + fmt(o.seconds) + " s";
    summary += c.time_limit > 0.0 ? ", limit " + fmt(c.time_limit) + " s)" : ")";
    line(c.number, o.passed && in_time, c.title, summary);
    const std::string name = "criterion_" + std::to_string(c.number) + ".json";
    io::write_text_file(first / name, io::dump({{"criterion", c.number}, {"passed", o.passed}, {"report", o.report}}));
    files.push_back(name);
  }

  // Repeat every report, plus a corpus written through the command line, and compare bytes.
  std::size_t identical = 0, compared = 0;
  for (const auto& c : criteria()) {
    const Outcome o = c.run();
    const std::string name = "criterion_" + std::to_string(c.number) + ".json";
    io::write_text_file(second / name, io::dump({{"criterion", c.number}, {"passed", o.passed}, {"report", o.report}}));
  }
  std::ostringstream sink;
  for (const fs::path& dir : {first, second})
    seqspec::cli::run({"corpus", "--seed", "11", "--out-dir", (dir / "corpus").string(), "-N", "1024"}, sink, sink);
  for (const auto& entry : fs::directory_iterator(first / "corpus")) files.push_back("corpus/" + entry.path().filename().string());
  for (const auto& name : files) {
    ++compared;
    if (fs::exists(second / name) && slurp(first / name) == slurp(second / name)) ++identical;
  }
  line(11, identical == compared && compared > 0, "byte-identical repeated reports",
       std::to_string(identical) + "/" + std::to_string(compared) + " files identical");

  return all_passed ? 0 : 1;
}
