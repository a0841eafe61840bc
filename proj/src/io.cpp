#include "seqspec/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace seqspec::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double parse_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(where, "non-finite number");
  return x;
}

// Parsed text yields unsigned integers; documents built in code carry signed ones.
bool is_non_negative_integer(const Json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::size_t parse_count(const Json& j, const std::string& where) {
  if (!is_non_negative_integer(j)) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::uint64_t parse_seed(const Json& j, const std::string& where) {
  if (!is_non_negative_integer(j)) fail(where, "seed must be a non-negative integer");
  return j.get<std::uint64_t>();
}

std::vector<CVector> parse_vector_list(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of vectors");
  std::vector<CVector> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    CVector v = parse_vector(j[i], where + "[" + std::to_string(i) + "]");
    if (v.dim() != dim) fail(where, "entry " + std::to_string(i) + " has dimension " + std::to_string(v.dim()) +
                                        ", expected " + std::to_string(dim));
    out.push_back(std::move(v));
  }
  return out;
}

Json complex_list(const std::vector<Complex>& zs) { return to_json(std::span<const Complex>(zs)); }

Json checks_to_json(const std::vector<HypothesisCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  return out;
}

void expect_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const char* k : keys) require(j, k, where);
}

void expect_complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of complex numbers");
  for (const auto& z : j) parse_complex(z, where);
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("failed writing " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(Complex z) { return Json::array({finite_or_null(z.real()), finite_or_null(z.imag())}); }

Json to_json(std::span<const Complex> zs) {
  Json out = Json::array();
  for (const Complex z : zs) out.push_back(to_json(z));
  return out;
}

Json to_json(const CVector& v) { return to_json(v.entries()); }

Json to_json(const CMatrix& m) { return {{"d", m.dim()}, {"entries", to_json(m.entries())}}; }

Complex parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "complex numbers are [re, im] pairs");
  return {parse_number(j[0], where), parse_number(j[1], where)};
}

CVector parse_vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty list of [re, im] pairs");
  std::vector<Complex> v;
  v.reserve(j.size());
  for (const auto& z : j) v.push_back(parse_complex(z, where));
  return CVector(std::move(v));
}

CMatrix parse_matrix(const Json& j, const std::string& where) {
  const std::size_t d = parse_count(require(j, "d", where), where + ".d");
  if (d < 1 || d > kMaxDim) fail(where, "d must lie in [1, 64]");
  const Json& entries = require(j, "entries", where);
  if (!entries.is_array() || entries.size() != d * d)
    fail(where, "entries must hold d*d = " + std::to_string(d * d) + " pairs");
  std::vector<Complex> values;
  values.reserve(d * d);
  for (const auto& z : entries) values.push_back(parse_complex(z, where + ".entries"));
  return CMatrix(d, std::move(values));
}

BoundedSeq parse_sequence(const Json& j) {
  const std::string where = "sequence";
  const Json& kind_j = require(j, "kind", where);
  if (!kind_j.is_string()) fail(where, "kind must be a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "modes_plus_decay") {
    ModesPlusDecay spec;
    spec.horizon = parse_count(require(j, "horizon", where), where + ".horizon");
    spec.seed = parse_seed(require(j, "seed", where), where + ".seed");
    const Json& modes = require(j, "modes", where);
    if (!modes.is_array()) fail(where, "modes must be a list");
    for (const auto& m : modes) {
      spec.modes.push_back({parse_complex(require(m, "theta", where + ".modes"), where + ".modes.theta"),
                            parse_vector(require(m, "v", where + ".modes"), where + ".modes.v")});
    }
    if (j.contains("d")) {
      spec.dim = parse_count(j["d"], where + ".d");
    } else if (!spec.modes.empty()) {
      spec.dim = spec.modes.front().v.dim();
    } else {
      fail(where, "\"d\" is required when there are no modes");
    }
    if (j.contains("decay")) {
      const Json& decay = j["decay"];
      const Json& type = require(decay, "type", where + ".decay");
      if (!type.is_string()) fail(where, "decay.type must be a string");
      try {
        spec.decay.type = decay_type_from_string(type.get<std::string>());
      } catch (const PreconditionError& e) {
        fail(where, e.what());
      }
      if (decay.contains("param")) spec.decay.param = parse_number(decay["param"], where + ".decay.param");
    }
    if (j.contains("amplitude")) spec.decay_amplitude = parse_number(j["amplitude"], where + ".amplitude");
    return BoundedSeq::generate(spec);
  }

  SourceKind source;
  if (kind == "materialized") {
    source = SourceKind::materialized;
  } else if (kind == "forced_system_output") {
    source = SourceKind::forced_system_output;
  } else if (kind == "custom_table") {
    source = SourceKind::custom_table;
  } else {
    fail(where, "unknown kind \"" + kind + "\"");
  }
  const std::size_t d = parse_count(require(j, "d", where), where + ".d");
  if (d < 1) fail(where, "d must be positive");
  const Json& values = require(j, "values", where);
  if (!values.is_array()) fail(where, "values must be a list of vectors");
  std::vector<Complex> flat;
  flat.reserve(values.size() * d);
  for (std::size_t n = 0; n < values.size(); ++n) {
    const Json& term = values[n];
    if (!term.is_array() || term.size() != d)
      fail(where, "term " + std::to_string(n) + " must hold d = " + std::to_string(d) + " pairs");
    for (const auto& z : term) flat.push_back(parse_complex(z, where + ".values"));
  }
  return BoundedSeq(d, std::move(flat), source);
}

Json sequence_to_json(const BoundedSeq& x) {
  Json values = Json::array();
  for (std::size_t n = 0; n < x.horizon(); ++n) values.push_back(to_json(x.at(n)));
  const char* kind = x.source() == SourceKind::modes_plus_decay ? "materialized" : to_string(x.source());
  return {{"kind", kind}, {"d", x.dim()}, {"values", std::move(values)}};
}

ForcingSpec parse_forcing(const Json& j) {
  const std::string where = "forcing";
  ForcingSpec f;
  const Json& kind = require(j, "kind", where);
  if (!kind.is_string()) fail(where, "kind must be a string");
  try {
    f.kind = forcing_kind_from_string(kind.get<std::string>());
  } catch (const PreconditionError& e) {
    fail(where, e.what());
  }
  if (f.kind == ForcingKind::geometric || f.kind == ForcingKind::power)
    f.param = parse_number(require(j, "param", where), where + ".param");
  if (j.contains("direction")) f.direction = parse_vector(j["direction"], where + ".direction");
  if (j.contains("seed")) f.seed = parse_seed(j["seed"], where + ".seed");
  const bool randomized = f.kind != ForcingKind::zero && f.kind != ForcingKind::custom_table && !f.direction;
  if (randomized && !j.contains("seed")) fail(where, "a seed is required when no direction is given");
  if (f.kind == ForcingKind::custom_table) {
    const Json& table = require(j, "table", where);
    if (!table.is_array() || table.empty()) fail(where, "table must be a non-empty list of vectors");
    f.table = parse_vector_list(table, parse_vector(table[0], where + ".table[0]").dim(), where + ".table");
  }
  return f;
}

Json to_json(const ForcingSpec& f) {
  Json j{{"kind", to_string(f.kind)}, {"summable", f.summable()}};
  if (f.kind == ForcingKind::geometric || f.kind == ForcingKind::power) j["param"] = f.param;
  if (f.direction) j["direction"] = to_json(*f.direction);
  j["seed"] = f.seed;
  if (f.kind == ForcingKind::custom_table) {
    Json table = Json::array();
    for (const auto& v : f.table) table.push_back(to_json(v));
    j["table"] = std::move(table);
  }
  return j;
}

SystemFile parse_system(const Json& j) {
  const std::string where = "system";
  SystemFile s{{parse_matrix(require(j, "B", where), "system.B"), 1, {}, {}}, 16384};
  if (j.contains("p")) s.system.p = parse_count(j["p"], where + ".p");
  if (s.system.p < 1 || s.system.p > kMaxDim) fail(where, "p must lie in [1, 64]");
  s.system.initial = parse_vector_list(require(j, "initial", where), s.system.b.dim(), where + ".initial");
  if (s.system.initial.size() != s.system.p)
    fail(where, "initial must hold p = " + std::to_string(s.system.p) + " vectors");
  s.system.forcing = j.contains("forcing") ? parse_forcing(j["forcing"]) : ForcingSpec{};
  if (j.contains("horizon")) s.horizon = parse_count(j["horizon"], where + ".horizon");
  return s;
}

Json to_json(const SystemFile& s) {
  Json initial = Json::array();
  for (const auto& v : s.system.initial) initial.push_back(to_json(v));
  return {{"B", to_json(s.system.b)},
          {"p", s.system.p},
          {"initial", std::move(initial)},
          {"forcing", to_json(s.system.forcing)},
          {"horizon", s.horizon}};
}

std::vector<CVector> parse_series(const Json& j) {
  const std::string where = "series";
  const std::size_t d = parse_count(require(j, "d", where), where + ".d");
  if (d < 1) fail(where, "d must be positive");
  auto coeffs = parse_vector_list(require(j, "coefficients", where), d, where + ".coefficients");
  if (coeffs.empty()) fail(where, "at least one coefficient is required");
  return coeffs;
}

Json to_json(const TailStats& t) {
  return {{"window_start", t.window_start},
          {"window_end", t.window_end},
          {"tail_sup", finite_or_null(t.tail_sup)},
          {"trend_slope", t.trend_slope ? finite_or_null(*t.trend_slope) : Json(nullptr)}};
}

Json to_json(const GrowthFit& g) {
  return {{"growth_class", to_string(g.growth)},
          {"slope", finite_or_null(g.slope)},
          {"early_slope", finite_or_null(g.early_slope)},
          {"late_slope", finite_or_null(g.late_slope)},
          {"vanished", g.vanished}};
}

Json to_json(const SpectrumInfo& s) {
  return {{"report", "spectrum_info"},
          {"eigenvalues", complex_list(s.eigenvalues)},
          {"spectral_radius", finite_or_null(s.spectral_radius)},
          {"peripheral", complex_list(s.peripheral)},
          {"peripheral_tol", s.peripheral_tol}};
}

Json to_json(const GelfandReport& g) {
  Json samples = Json::array();
  for (const auto& s : g.samples) {
    samples.push_back({{"n", s.n}, {"log_root_norm", s.root_norm.is_zero() ? Json(nullptr) : Json(s.root_norm.log())}});
  }
  return {{"report", "gelfand"},
          {"estimate", finite_or_null(g.estimate)},
          {"eig_radius", finite_or_null(g.eig_radius)},
          {"discrepancy", finite_or_null(g.discrepancy)},
          {"nilpotent", g.nilpotent},
          {"samples", std::move(samples)}};
}

Json to_json(const PowerBoundVerdict& p) {
  return {{"n_max", p.n_max},
          {"log_sup_norm", p.sup_norm.is_zero() ? Json(nullptr) : finite_or_null(p.sup_norm.log())},
          {"within_bound", p.within_bound},
          {"growth", to_json(p.growth)}};
}

Json to_json(const SpectrumScanReport& s, bool include_grid) {
  Json detected = Json::array();
  for (const auto& d : s.detected) {
    detected.push_back({{"theta", to_json(d.theta)}, {"angle", d.angle}, {"peak_mean_norm", d.peak_mean_norm}});
  }
  Json j{{"report", "spectrum_scan"},
         {"grid_size", s.grid_size},
         {"epsilon", s.epsilon},
         {"n_used", s.n_used},
         {"detected", std::move(detected)}};
  if (include_grid) j["grid_norms"] = s.grid_norms;
  return j;
}

Json to_json(const ModeDecomp& m) {
  Json modes = Json::array();
  for (const auto& mode : m.modes) modes.push_back({{"theta", to_json(mode.theta)}, {"v", to_json(mode.v)}});
  return {{"report", "modes"},
          {"first", m.first},
          {"n_used", m.n_used},
          {"modes", std::move(modes)},
          {"residual", to_json(m.residual)}};
}

Json to_json(const VanishingVerdict& v) {
  return {{"report", "vanishing_check"},
          {"tail", to_json(v.tail)},
          {"tol_vanish", v.tol_vanish},
          {"vanishing", v.vanishing},
          {"scan", to_json(v.scan)},
          {"scan_empty", v.scan_empty},
          {"consistent", v.consistent}};
}

Json to_json(const SinglePointVerdict& v) {
  return {{"report", "single_point_check"},
          {"theta", to_json(v.theta)},
          {"difference_tail", to_json(v.difference_tail)},
          {"tol_vanish", v.tol_vanish},
          {"difference_vanishing", v.difference_vanishing},
          {"scan", to_json(v.scan)},
          {"scan_single_at_theta", v.scan_single_at_theta},
          {"scan_within_theta", v.scan_within_theta},
          {"consistent", v.consistent}};
}

Json to_json(const KtzVerdict& v) {
  return {{"report", "ktz"},
          {"theta", to_json(v.theta)},
          {"n_max", v.n_max},
          {"power", to_json(v.power)},
          {"power_bounded", v.power_bounded},
          {"peripheral", complex_list(v.peripheral)},
          {"peripheral_within_theta", v.peripheral_within_theta},
          {"hypotheses_met", v.hypotheses_met},
          {"unmet", v.unmet},
          {"difference_tail", v.hypotheses_met ? to_json(v.difference_tail) : Json(nullptr)},
          {"settled_from", v.settled_from ? Json(*v.settled_from) : Json(nullptr)},
          {"limit_attained", v.limit_attained}};
}

Json to_json(const TrajectoryReport& r) {
  return {{"sup_norm", finite_or_null(r.sup_norm)},
          {"growth", to_json(r.growth)},
          {"bounded_verdict", r.bounded_verdict},
          {"horizon", r.horizon}};
}

Json to_json(const ModeLimitVerdict& v) {
  return {{"report", "mode_limit"},
          {"peripheral", complex_list(v.peripheral)},
          {"decomposition", to_json(v.decomposition)},
          {"residual_tol", v.residual_tol},
          {"residual_ok", v.residual_ok},
          {"limit_test_applicable", v.limit_test_applicable},
          {"cauchy_tail", finite_or_null(v.cauchy_tail)},
          {"limit_exists", v.limit_exists},
          {"limit", v.limit ? to_json(*v.limit) : Json(nullptr)},
          {"passed", v.passed}};
}

Json to_json(const DelayProbeReport& r) {
  Json j{{"report", "delay_probe"},
         {"p", r.p},
         {"horizon", r.horizon},
         {"hypotheses", checks_to_json(r.hypotheses)},
         {"hypotheses_met", r.hypotheses_met},
         {"theta", to_json(r.theta)}};
  if (!r.hypotheses_met) return j;
  j["tol_vanish"] = r.tol_vanish;
  j["one_step"] = {{"tail", to_json(r.one_step)}, {"vanishes", r.one_step_vanishes}};
  j["p_step"] = {{"tail", to_json(r.p_step)}, {"vanishes", r.p_step_vanishes}};
  j["pth_roots"] = complex_list(r.pth_roots);
  j["scan"] = to_json(r.scan);
  j["scan_on_roots"] = complex_list(r.scan_on_roots);
  j["scan_off_roots"] = complex_list(r.scan_off_roots);
  return j;
}

Json to_json(const ContainmentVerdict& v) {
  Json violations = Json::array();
  for (const auto& d : v.violations) violations.push_back(to_json(d.theta));
  return {{"report", "containment"},
          {"peripheral", complex_list(v.peripheral)},
          {"scan", to_json(v.scan)},
          {"violations", std::move(violations)},
          {"passed", v.passed}};
}

Json to_json(const PoleProbeReport& r) {
  Json norms = Json::array();
  for (double x : r.norms) norms.push_back(finite_or_null(x));
  return {{"report", "pole_probe"},
          {"center", to_json(r.center)},
          {"radii", r.radii},
          {"norms", std::move(norms)},
          {"fitted_order", finite_or_null(r.fitted_order)}};
}

Json to_json(const IsometryBoundReport& r) {
  return {{"report", "isometry_bound"},
          {"samples", r.samples},
          {"violations", r.violations},
          {"worst_slack", finite_or_null(r.worst_slack)},
          {"worst_lambda", to_json(r.worst_lambda)},
          {"passed", r.passed}};
}

Json resolvent_scan_to_json(std::span<const ResolventSample> samples) {
  Json points = Json::array();
  for (const auto& s : samples) {
    points.push_back({{"lambda", to_json(s.lambda)}, {"norm", finite_or_null(s.resolvent_norm)}, {"singular", s.singular}});
  }
  return {{"report", "resolvent_scan"}, {"samples", std::move(points)}};
}

std::string resolvent_scan_to_csv(std::span<const ResolventSample> samples) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im,norm,singular\n";
  for (const auto& s : samples) {
    os << s.lambda.real() << ',' << s.lambda.imag() << ',';
    if (std::isfinite(s.resolvent_norm)) {
      os << s.resolvent_norm;
    } else {
      os << "inf";
    }
    os << ',' << (s.singular ? 1 : 0) << '\n';
  }
  return os.str();
}

Json error_to_json(const Error& e) {
  Json err{{"kind", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}};
  if (const auto* s = dynamic_cast<const SingularMatrixError*>(&e)) {
    err["pivot_row"] = s->pivot_row();
    err["pivot_magnitude"] = finite_or_null(s->pivot_magnitude());
  } else if (const auto* n = dynamic_cast<const NumericalFailure*>(&e)) {
    Json r = Json::array();
    for (double x : n->residuals()) r.push_back(finite_or_null(x));
    err["residuals"] = std::move(r);
  } else if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) {
    Json r = Json::array();
    for (double x : d->last_term_norms()) r.push_back(finite_or_null(x));
    err["last_term_norms"] = std::move(r);
  } else if (const auto* u = dynamic_cast<const UnboundedTrajectory*>(&e)) {
    err["index"] = u->index();
  }
  return {{"error", std::move(err)}};
}

void validate_report(const Json& j) {
  const std::string tag = require(j, "report", "report").get<std::string>();
  const std::string where = "report " + tag;
  if (tag == "spectrum_scan") {
    expect_keys(j, {"grid_size", "epsilon", "n_used", "detected"}, where);
    for (const auto& d : j["detected"]) {
      parse_complex(require(d, "theta", where), where);
      parse_number(require(d, "angle", where), where);
      parse_number(require(d, "peak_mean_norm", where), where);
    }
    if (j.contains("vanishing_check")) validate_report(j["vanishing_check"]);
    if (j.contains("single_point_check")) validate_report(j["single_point_check"]);
  } else if (tag == "vanishing_check") {
    expect_keys(j, {"tail", "tol_vanish", "vanishing", "scan", "scan_empty", "consistent"}, where);
    validate_report(j["scan"]);
  } else if (tag == "single_point_check") {
    expect_keys(j, {"theta", "difference_tail", "difference_vanishing", "scan", "scan_within_theta", "consistent"},
                where);
    parse_complex(j["theta"], where);
    validate_report(j["scan"]);
  } else if (tag == "modes") {
    expect_keys(j, {"first", "n_used", "modes", "residual"}, where);
    for (const auto& m : j["modes"]) {
      parse_complex(require(m, "theta", where), where);
      parse_vector(require(m, "v", where), where);
    }
  } else if (tag == "gelfand") {
    expect_keys(j, {"estimate", "eig_radius", "discrepancy", "nilpotent", "samples"}, where);
  } else if (tag == "ktz") {
    expect_keys(j, {"theta", "n_max", "power", "hypotheses_met", "unmet", "limit_attained"}, where);
    parse_complex(j["theta"], where);
    expect_complex_list(j["peripheral"], where);
  } else if (tag == "trajectory") {
    parse_sequence(j);
    expect_keys(j, {"trajectory_report"}, where);
    if (j.contains("delay_probe")) validate_report(j["delay_probe"]);
    if (j.contains("mode_limit") && !j["mode_limit"].is_null()) validate_report(j["mode_limit"]);
    if (j.contains("containment") && !j["containment"].is_null()) validate_report(j["containment"]);
  } else if (tag == "mode_limit") {
    expect_keys(j, {"peripheral", "decomposition", "residual_ok", "limit_exists", "passed"}, where);
    validate_report(j["decomposition"]);
  } else if (tag == "delay_probe") {
    expect_keys(j, {"p", "horizon", "hypotheses", "hypotheses_met", "theta"}, where);
    if (j["hypotheses_met"].get<bool>()) {
      expect_keys(j, {"one_step", "p_step", "pth_roots", "scan"}, where);
      expect_complex_list(j["pth_roots"], where);
      validate_report(j["scan"]);
    }
  } else if (tag == "containment") {
    expect_keys(j, {"peripheral", "scan", "violations", "passed"}, where);
    validate_report(j["scan"]);
  } else if (tag == "pole_probe") {
    expect_keys(j, {"center", "radii", "norms", "fitted_order"}, where);
    parse_complex(j["center"], where);
  } else if (tag == "isometry_bound") {
    expect_keys(j, {"samples", "violations", "worst_slack", "passed"}, where);
  } else if (tag == "resolvent_scan") {
    for (const auto& s : require(j, "samples", where)) {
      parse_complex(require(s, "lambda", where), where);
      expect_keys(s, {"norm", "singular"}, where);
    }
  } else if (tag == "cayley") {
    expect_keys(j, {"d", "residual", "scaled_bound", "char_poly"}, where);
    expect_complex_list(j["char_poly"], where);
  } else if (tag == "cauchy") {
    expect_keys(j, {"k", "radius", "nodes", "coefficient"}, where);
    parse_vector(j["coefficient"], where);
  } else if (tag == "spectrum_info") {
    expect_complex_list(require(j, "eigenvalues", where), where);
    expect_complex_list(require(j, "peripheral", where), where);
  } else if (tag == "corpus") {
    expect_keys(j, {"seed", "horizon", "members"}, where);
  } else {
    fail(where, "unknown report tag");
  }
}

}  // namespace seqspec::io
