#include "seqspec/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "seqspec/corpus.hpp"
#include "seqspec/dynamics.hpp"
#include "seqspec/eigen.hpp"
#include "seqspec/io.hpp"
#include "seqspec/kernels.hpp"
#include "seqspec/linalg.hpp"
#include "seqspec/resolvent.hpp"
#include "seqspec/sequence.hpp"

namespace seqspec::cli {
namespace {

using io::Json;

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x))
      throw UsageError(flag + ": '" + item + "' is not a finite number");
    out.push_back(x);
  }
  return out;
}

// "re,im" or a bare real number.
Complex parse_complex_arg(const std::string& text, const std::string& flag) {
  const auto xs = parse_numbers(text, flag);
  if (xs.size() == 1) return {xs[0], 0.0};
  if (xs.size() == 2) return {xs[0], xs[1]};
  throw UsageError(flag + ": expected re,im");
}

struct Output {
  std::string path;
  std::ostream* out;

  // Writes the report; with a file target, prints `summary` as the one-line
  // human summary on standard output.
  void emit(const std::string& text, const std::string& summary) const {
    if (path.empty()) {
      *out << text;
    } else {
      io::write_text_file(path, text);
      *out << summary << " -> " << path << '\n';
    }
  }
  void emit(const Json& report, const std::string& summary) const { emit(io::dump(report), summary); }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string fmt(Complex z) { return "(" + fmt(z.real()) + ", " + fmt(z.imag()) + ")"; }

struct Settings {
  std::string input;
  std::string output;
  std::string isa = "auto";
  std::string format = "json";
  std::size_t horizon = 0;  // 0: take it from the input
  std::size_t grid_size = kDefaultGridSize;
  std::optional<double> epsilon;
  std::optional<double> tol_vanish;
  double peripheral_tol = kDefaultPeripheralTol;
  std::vector<std::string> thetas;
  std::string theta = "1,0";
  bool from_scan = false;
  bool include_grid = false;
  bool checks = false;
  bool verify = false;
  std::size_t n_used = 0;
  std::size_t first = 0;
  std::size_t n_max = 0;
  double limit_tol = 1e-8;
  std::string circle;
  std::string rect;
  std::string radii = "1e-2,3e-3,1e-3,3e-4,1e-4,3e-5,1e-5";
  std::size_t k = 0;
  double radius = 1.0;
  std::size_t nodes = kDefaultQuadratureNodes;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

void require_json_format(const Settings& s, const char* cmd) {
  if (s.format != "json") throw UsageError(std::string(cmd) + ": only --format json is supported; csv is for resolvent-scan");
}

CheckOptions check_options(const Settings& s) { return {s.grid_size, s.epsilon, s.tol_vanish}; }

int cmd_spectrum_scan(const Settings& s, const Output& out) {
  require_json_format(s, "spectrum-scan");
  const BoundedSeq x = io::parse_sequence(io::read_json_file(s.input));
  const double eps = s.epsilon.value_or(default_epsilon(x));
  const SpectrumScanReport scan = spectrum_scan(x, s.grid_size, eps);
  Json j = io::to_json(scan, s.include_grid);
  if (s.checks) {
    j["vanishing_check"] = io::to_json(vanishing_check(x, check_options(s)));
    if (!s.thetas.empty())
      j["single_point_check"] = io::to_json(single_point_check(x, parse_complex_arg(s.thetas.front(), "--theta"), check_options(s)));
  }
  out.emit(j, "spectrum-scan: " + std::to_string(scan.detected.size()) + " point(s) above epsilon " + fmt(eps));
  return 0;
}

int cmd_modes(const Settings& s, const Output& out) {
  require_json_format(s, "modes");
  const BoundedSeq x = io::parse_sequence(io::read_json_file(s.input));
  std::vector<Complex> thetas;
  for (const auto& t : s.thetas) thetas.push_back(parse_complex_arg(t, "--theta"));
  if (s.from_scan) {
    for (const auto& d : spectrum_scan(x, s.grid_size, s.epsilon.value_or(default_epsilon(x))).detected)
      thetas.push_back(d.theta);
  }
  const std::size_t n_used = s.n_used == 0 ? x.horizon() - s.first : s.n_used;
  const ModeDecomp m = extract_modes(x, thetas, n_used, s.first);
  out.emit(io::to_json(m), "modes: " + std::to_string(m.modes.size()) + " mode(s), residual tail " +
                               fmt(m.residual.tail_sup));
  return 0;
}

Json trajectory_json(const Trajectory& t, const ForcingSpec& forcing) {
  Json j = io::sequence_to_json(t.values);
  j["report"] = "trajectory";
  j["trajectory_report"] = io::to_json(t.report);
  j["forcing_summable"] = forcing.summable();
  return j;
}

int cmd_simulate(const Settings& s, const Output& out) {
  require_json_format(s, "simulate");
  const io::SystemFile sys = io::parse_system(io::read_json_file(s.input));
  if (sys.system.p != 1) throw PreconditionError("simulate: the system has p = " + std::to_string(sys.system.p) + "; use delay-simulate");
  const std::size_t horizon = s.horizon == 0 ? sys.horizon : s.horizon;
  const Trajectory t = simulate_forced(sys.system.b, sys.system.initial.front(), sys.system.forcing, horizon);
  Json j = trajectory_json(t, sys.system.forcing);
  if (s.verify) {
    if (t.report.bounded_verdict) {
      j["mode_limit"] = io::to_json(mode_limit_check(sys.system.b, t.values, s.peripheral_tol));
      j["containment"] = io::to_json(spectrum_containment_check(sys.system.b, t.values, s.peripheral_tol, s.grid_size));
    } else {
      j["mode_limit"] = nullptr;
      j["containment"] = nullptr;
    }
  }
  out.emit(j, std::string("simulate: ") + std::to_string(horizon) + " steps, growth " +
                  to_string(t.report.growth.growth) + ", sup norm " + fmt(t.report.sup_norm));
  return 0;
}

int cmd_delay_simulate(const Settings& s, const Output& out) {
  require_json_format(s, "delay-simulate");
  const io::SystemFile sys = io::parse_system(io::read_json_file(s.input));
  const std::size_t horizon = s.horizon == 0 ? sys.horizon : s.horizon;
  const Trajectory t = simulate_delay(sys.system, horizon);
  Json j = trajectory_json(t, sys.system.forcing);
  const DelayProbeReport probe = delay_probe(sys.system, horizon, s.peripheral_tol, s.grid_size);
  j["delay_probe"] = io::to_json(probe);
  std::string summary = "delay-simulate: p = " + std::to_string(sys.system.p) + ", growth " +
                        to_string(t.report.growth.growth);
  if (probe.hypotheses_met) {
    summary += ", one-step tail " + fmt(probe.one_step.tail_sup) + ", p-step tail " + fmt(probe.p_step.tail_sup);
  } else {
    summary += ", hypotheses not met";
  }
  out.emit(j, summary);
  return 0;
}

int cmd_gelfand(const Settings& s, const Output& out) {
  require_json_format(s, "gelfand");
  const CMatrix a = io::parse_matrix(io::read_json_file(s.input));
  const GelfandReport g = gelfand_radius_estimate(a, s.n_max == 0 ? 512 : s.n_max);
  Json j = io::to_json(g);
  j["spectrum"] = io::to_json(spectrum_info(a, s.peripheral_tol));
  out.emit(j, "gelfand: estimate " + fmt(g.estimate) + ", eigenvalue radius " + fmt(g.eig_radius));
  return 0;
}

int cmd_ktz(const Settings& s, const Output& out) {
  require_json_format(s, "ktz");
  const CMatrix a = io::parse_matrix(io::read_json_file(s.input));
  const KtzVerdict v = ktz_check(a, parse_complex_arg(s.theta, "--theta"), s.n_max == 0 ? 400 : s.n_max,
                                 {s.peripheral_tol, s.limit_tol});
  std::string summary = "ktz: ";
  if (v.hypotheses_met) {
    summary += "hypotheses met, tail " + fmt(v.difference_tail.tail_sup) + (v.limit_attained ? ", limit attained" : ", limit not attained");
  } else {
    summary += "hypotheses not met";
  }
  out.emit(io::to_json(v), summary);
  return 0;
}

int cmd_resolvent_scan(const Settings& s, const Output& out) {
  const CMatrix a = io::parse_matrix(io::read_json_file(s.input));
  std::vector<Complex> grid;
  if (!s.circle.empty() == !s.rect.empty()) throw UsageError("resolvent-scan: give exactly one of --circle or --rect");
  if (!s.circle.empty()) {
    const auto c = parse_numbers(s.circle, "--circle");
    if (c.size() != 4 || !(c[2] > 0.0) || c[3] < 1 || c[3] != std::floor(c[3]))
      throw UsageError("--circle: expected cx,cy,radius,count with radius > 0 and integer count >= 1");
    grid = circle_grid({c[0], c[1]}, c[2], static_cast<std::size_t>(c[3]));
  } else {
    const auto r = parse_numbers(s.rect, "--rect");
    if (r.size() != 6 || r[4] < 1 || r[5] < 1 || r[4] != std::floor(r[4]) || r[5] != std::floor(r[5]))
      throw UsageError("--rect: expected re_min,re_max,im_min,im_max,nx,ny with integer nx, ny >= 1");
    grid = rect_grid(r[0], r[1], r[2], r[3], static_cast<std::size_t>(r[4]), static_cast<std::size_t>(r[5]));
  }
  const auto samples = resolvent_norm_scan(a, grid);
  const auto singular = std::count_if(samples.begin(), samples.end(), [](const ResolventSample& x) { return x.singular; });
  const std::string summary = "resolvent-scan: " + std::to_string(samples.size()) + " point(s), " +
                              std::to_string(singular) + " singular";
  if (s.format == "csv") {
    out.emit(io::resolvent_scan_to_csv(samples), summary);
  } else {
    out.emit(io::resolvent_scan_to_json(samples), summary);
  }
  return 0;
}

int cmd_pole_probe(const Settings& s, const Output& out) {
  require_json_format(s, "pole-probe");
  const CMatrix u = io::parse_matrix(io::read_json_file(s.input));
  const auto radii = parse_numbers(s.radii, "--radii");
  const PoleProbeReport r = pole_order_probe(u, parse_complex_arg(s.theta, "--theta"), radii);
  out.emit(io::to_json(r), "pole-probe: fitted order " + fmt(r.fitted_order) + " at " + fmt(r.center));
  return 0;
}

int cmd_cayley(const Settings& s, const Output& out) {
  require_json_format(s, "cayley");
  const CMatrix a = io::parse_matrix(io::read_json_file(s.input));
  const double residual = cayley_hamilton_residual(a);
  const double bound = 1e-8 * std::pow(1.0 + operator_norm(a), static_cast<double>(a.dim()));
  const Polynomial p = char_poly(a);
  const Json j{{"report", "cayley"},
               {"d", a.dim()},
               {"char_poly", io::to_json(std::span<const Complex>(p.coeffs))},
               {"residual", io::finite_or_null(residual)},
               {"scaled_bound", io::finite_or_null(bound)},
               {"within_bound", residual <= bound}};
  out.emit(j, "cayley: residual " + fmt(residual) + " (bound " + fmt(bound) + ")");
  return 0;
}

int cmd_cauchy_recover(const Settings& s, const Output& out) {
  require_json_format(s, "cauchy-recover");
  const std::vector<CVector> coeffs = io::parse_series(io::read_json_file(s.input));
  const VectorOracle f = [&coeffs](Complex z) {
    // Horner evaluation of sum_k c_k z^k.
    CVector acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
      acc *= z;
      acc += coeffs[i];
    }
    return acc;
  };
  const CVector c = cauchy_coefficient(f, s.k, s.radius, s.nodes);
  const Json j{{"report", "cauchy"}, {"k", s.k}, {"radius", s.radius}, {"nodes", s.nodes}, {"coefficient", io::to_json(c)}};
  out.emit(j, "cauchy-recover: coefficient " + std::to_string(s.k) + " has norm " + fmt(c.norm()));
  return 0;
}

Json modes_plus_decay_json(const ModesPlusDecay& spec) {
  Json modes = Json::array();
  for (const auto& m : spec.modes) modes.push_back({{"theta", io::to_json(m.theta)}, {"v", io::to_json(m.v)}});
  return {{"kind", "modes_plus_decay"},
          {"d", spec.dim},
          {"modes", std::move(modes)},
          {"decay", {{"type", to_string(spec.decay.type)}, {"param", spec.decay.param}}},
          {"amplitude", spec.decay_amplitude},
          {"horizon", spec.horizon},
          {"seed", spec.seed}};
}

int cmd_corpus(const Settings& s, const Output& out) {
  require_json_format(s, "corpus");
  if (!s.seed) throw UsageError("corpus: --seed is required");
  if (s.out_dir.empty()) throw UsageError("corpus: --out-dir is required");
  const std::uint64_t seed = *s.seed;
  const std::size_t horizon = s.horizon == 0 ? 16384 : s.horizon;
  const std::filesystem::path dir(s.out_dir);
  std::filesystem::create_directories(dir);

  Json members = Json::array();
  auto write = [&](const std::string& file, const Json& j, Json entry) {
    io::write_text_file(dir / file, io::dump(j));
    entry["file"] = file;
    members.push_back(std::move(entry));
  };

  for (const CorpusMember& m : sequence_corpus(seed, horizon)) {
    write(m.name + ".json", modes_plus_decay_json(m.spec),
          {{"type", "sequence"},
           {"family", to_string(m.family)},
           {"expect_vanishing", m.expect_vanishing},
           {"single_theta", m.single_theta ? io::to_json(*m.single_theta) : Json(nullptr)}});
  }
  for (std::size_t i = 0; i < 5; ++i) {
    const std::size_t d = 2 + i;
    std::vector<Complex> eig;
    const CMatrix a = random_diagonalizable(d, seed + 1000 + i, 10.0, &eig);
    double rho = 0.0;
    for (const Complex z : eig) rho = std::max(rho, std::abs(z));
    write("matrix_" + std::to_string(i) + ".json", io::to_json(a), {{"type", "matrix"}, {"spectral_radius", rho}});
  }
  for (std::size_t i = 0; i < 3; ++i) {
    write("unitary_" + std::to_string(i) + ".json", io::to_json(random_unitary(2 + i, seed + 2000 + i)),
          {{"type", "unitary"}});
  }
  const io::SystemFile alternating{{CMatrix::identity(1), 2, {CVector{1.0}, CVector{-1.0}}, {}}, horizon};
  write("system_alternating_delay.json", io::to_json(alternating), {{"type", "system"}});
  ForcingSpec geometric{ForcingKind::geometric, 0.5, std::nullopt, seed + 3000, {}};
  const io::SystemFile mixed{
      {CMatrix::diagonal({1.0, -1.0, 0.5}), 1, {random_unit_vector(3, seed + 3001)}, geometric}, horizon};
  write("system_mixed_peripheral.json", io::to_json(mixed), {{"type", "system"}});

  const Json manifest{{"report", "corpus"}, {"seed", seed}, {"horizon", horizon}, {"members", members}};
  io::write_text_file(dir / "manifest.json", io::dump(manifest));
  if (s.output.empty()) {
    *out.out << "corpus: " << members.size() << " member(s) in " << dir.string() << '\n';
  } else {
    out.emit(manifest, "corpus: " + std::to_string(members.size()) + " member(s) in " + dir.string());
  }
  return 0;
}

void report_error(std::ostream& err, const Json& j) { err << j.dump() << '\n'; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Spectral analysis of bounded vector sequences, matrix resolvents and linear difference equations",
               "seqspec"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", s.output, "Write the report to this file and print a one-line summary");
  app.add_option("--isa", s.isa, "Kernel set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();
  app.add_option("--format", s.format, "Report format; csv only for resolvent-scan")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  auto input = [&s](CLI::App* sub, const char* what) {
    sub->add_option("-i,--input", s.input, what)->required()->check(CLI::ExistingFile);
  };
  auto scan_flags = [&s](CLI::App* sub) {
    sub->add_option("-K,--grid-size", s.grid_size, "Scan grid size (>= 64)")->capture_default_str();
    sub->add_option("--epsilon", s.epsilon, "Detection threshold (default max(1e-6, 0.01 sup|x_n|))");
  };

  auto* scan = app.add_subcommand("spectrum-scan", "Unit-circle points where rotated means persist");
  input(scan, "Sequence JSON");
  scan_flags(scan);
  scan->add_option("--tol-vanish", s.tol_vanish, "Vanishing tolerance (default max(1e-9, 1e-3 sup|x_n|))");
  scan->add_flag("--grid", s.include_grid, "Include the mean norm at every grid angle");
  scan->add_flag("--checks", s.checks, "Add the vanishing check and, with --theta, the single-point check");
  scan->add_option("--theta", s.thetas, "Point for the single-point check, as re,im")->expected(0, 1);

  auto* modes = app.add_subcommand("modes", "Mode amplitudes at given unit-circle points");
  input(modes, "Sequence JSON");
  modes->add_option("--theta", s.thetas, "Mode point as re,im (repeatable; use --theta=-1,0 for negatives)");
  modes->add_flag("--from-scan", s.from_scan, "Also use every spectrum-scan detection");
  modes->add_option("--n-used", s.n_used, "Averaging length (default: to the end of the sequence)");
  modes->add_option("--first", s.first, "First index of the averaging window")->capture_default_str();
  scan_flags(modes);

  auto* sim = app.add_subcommand("simulate", "Iterate x_{n+1} = B x_n + y_n");
  input(sim, "System JSON with p = 1");
  sim->add_option("-N,--horizon", s.horizon, "Number of terms (default: from the system file)");
  sim->add_flag("--verify", s.verify, "Add the mode-limit and spectrum-containment verdicts");
  sim->add_option("--peripheral-tol", s.peripheral_tol, "Distance from the unit circle counted as peripheral")
      ->capture_default_str();
  sim->add_option("-K,--grid-size", s.grid_size, "Scan grid size for --verify")->capture_default_str();

  auto* delay = app.add_subcommand("delay-simulate", "Iterate x_{n+p} = B x_n + y_n and probe its difference tails");
  input(delay, "System JSON");
  delay->add_option("-N,--horizon", s.horizon, "Number of terms (default: from the system file)");
  delay->add_option("--peripheral-tol", s.peripheral_tol, "Distance from the unit circle counted as peripheral")
      ->capture_default_str();
  delay->add_option("-K,--grid-size", s.grid_size, "Scan grid size")->capture_default_str();

  auto* gelfand = app.add_subcommand("gelfand", "Spectral radius from ||A^n||^(1/n)");
  input(gelfand, "Matrix JSON");
  gelfand->add_option("--n-max", s.n_max, "Largest power (default 512)");
  gelfand->add_option("--peripheral-tol", s.peripheral_tol, "Distance from the unit circle counted as peripheral")
      ->capture_default_str();

  auto* ktz = app.add_subcommand("ktz", "Decay of ||T^{n+1} - theta T^n|| for power-bounded T");
  input(ktz, "Matrix JSON");
  ktz->add_option("--theta", s.theta, "Unimodular point as re,im")->capture_default_str();
  ktz->add_option("--n-max", s.n_max, "Largest power (default 400)");
  ktz->add_option("--limit-tol", s.limit_tol, "Tail tolerance for the limit")->capture_default_str();
  ktz->add_option("--peripheral-tol", s.peripheral_tol, "Distance from the unit circle counted as peripheral")
      ->capture_default_str();

  auto* rscan = app.add_subcommand("resolvent-scan", "||(lambda I - A)^{-1}|| over a grid");
  input(rscan, "Matrix JSON");
  rscan->add_option("--circle", s.circle, "cx,cy,radius,count");
  rscan->add_option("--rect", s.rect, "re_min,re_max,im_min,im_max,nx,ny");

  auto* pole = app.add_subcommand("pole-probe", "Pole order of the resolvent of a unitary at an eigenvalue");
  input(pole, "Unitary matrix JSON");
  pole->add_option("--theta", s.theta, "Eigenvalue as re,im")->capture_default_str();
  pole->add_option("--radii", s.radii, "Strictly decreasing radii in [1e-8, 0.1]")->capture_default_str();

  auto* cayley = app.add_subcommand("cayley", "Characteristic polynomial and ||p(A)||");
  input(cayley, "Matrix JSON");

  auto* cauchy = app.add_subcommand("cauchy-recover", "Taylor coefficient from the trapezoidal contour rule");
  input(cauchy, "Series JSON {\"d\", \"coefficients\"}");
  cauchy->add_option("-k", s.k, "Coefficient index")->required();
  cauchy->add_option("--radius", s.radius, "Contour radius")->capture_default_str();
  cauchy->add_option("--nodes", s.nodes, "Quadrature nodes (>= 4)")->capture_default_str();

  auto* corpus = app.add_subcommand("corpus", "Write a seeded test corpus");
  corpus->add_option("--seed", s.seed, "Corpus seed")->required();
  corpus->add_option("--out-dir", s.out_dir, "Target directory")->required();
  corpus->add_option("-N,--horizon", s.horizon, "Sequence horizon (default 16384)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, io::error_to_json(UsageError(e.what())));
    return 1;
  }

  try {
    if (s.isa == "scalar") {
      kernels::select(kernels::Isa::scalar);
    } else if (s.isa == "avx2") {
      kernels::select(kernels::Isa::avx2);
    } else {
      kernels::select(kernels::detect());
    }
    if (s.format == "csv" && !rscan->parsed()) throw UsageError("--format csv is only available for resolvent-scan");
    const Output o{s.output, &out};
    if (scan->parsed()) return cmd_spectrum_scan(s, o);
    if (modes->parsed()) return cmd_modes(s, o);
    if (sim->parsed()) return cmd_simulate(s, o);
    if (delay->parsed()) return cmd_delay_simulate(s, o);
    if (gelfand->parsed()) return cmd_gelfand(s, o);
    if (ktz->parsed()) return cmd_ktz(s, o);
    if (rscan->parsed()) return cmd_resolvent_scan(s, o);
    if (pole->parsed()) return cmd_pole_probe(s, o);
    if (cayley->parsed()) return cmd_cayley(s, o);
    if (cauchy->parsed()) return cmd_cauchy_recover(s, o);
    if (corpus->parsed()) return cmd_corpus(s, o);
    throw UsageError("no subcommand given");
  } catch (const Error& e) {
    report_error(err, io::error_to_json(e));
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, io::error_to_json(UsageError(e.what())));
    return 1;
  } catch (const std::exception& e) {
    report_error(err, Json{{"error", {{"kind", "internal"}, {"message", e.what()}, {"exit_code", 2}}}});
    return 2;
  }
}

}  // namespace seqspec::cli
