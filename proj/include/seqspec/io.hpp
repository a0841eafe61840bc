#pragma once

// JSON encodings. Complex numbers are [re, im] pairs, vectors are lists of
// pairs, matrices are {"d": d, "entries": [...]} row-major. Non-finite report
// values (sentinels such as an infinite resolvent norm) are written as null.
// Every report carries a "report" tag naming its schema.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqspec/dynamics.hpp"
#include "seqspec/eigen.hpp"
#include "seqspec/errors.hpp"
#include "seqspec/resolvent.hpp"
#include "seqspec/sequence.hpp"
#include "seqspec/types.hpp"

namespace seqspec::io {

using Json = nlohmann::json;

/// Malformed input. Maps to the usage/parse exit status.
class ParseError : public UsageError {
 public:
  using UsageError::UsageError;
};

Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline; identical input gives identical bytes.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump(const Json& j);

Json to_json(Complex z);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Json to_json(std::span<const Complex> zs);
Json finite_or_null(double x);

Complex parse_complex(const Json& j, const std::string& where);
CVector parse_vector(const Json& j, const std::string& where);
CMatrix parse_matrix(const Json& j, const std::string& where = "matrix");

/// materialized / forced_system_output / custom_table sequences (explicit
/// values) and modes_plus_decay generators.
BoundedSeq parse_sequence(const Json& j);
Json sequence_to_json(const BoundedSeq& x);

ForcingSpec parse_forcing(const Json& j);
Json to_json(const ForcingSpec& f);

struct SystemFile {
  DelaySystem system;
  std::size_t horizon = 16384;
};

SystemFile parse_system(const Json& j);
Json to_json(const SystemFile& s);

/// Coefficient table of a vector power series f(z) = sum_k c_k z^k:
/// {"d": d, "coefficients": [<vector>, ...]}.
std::vector<CVector> parse_series(const Json& j);

Json to_json(const TailStats& t);
Json to_json(const GrowthFit& g);
Json to_json(const SpectrumInfo& s);
Json to_json(const GelfandReport& g);
Json to_json(const PowerBoundVerdict& p);
Json to_json(const SpectrumScanReport& s, bool include_grid = false);
Json to_json(const ModeDecomp& m);
Json to_json(const VanishingVerdict& v);
Json to_json(const SinglePointVerdict& v);
Json to_json(const KtzVerdict& v);
Json to_json(const TrajectoryReport& r);
Json to_json(const ModeLimitVerdict& v);
Json to_json(const DelayProbeReport& r);
Json to_json(const ContainmentVerdict& v);
Json to_json(const PoleProbeReport& r);
Json to_json(const IsometryBoundReport& r);
Json resolvent_scan_to_json(std::span<const ResolventSample> samples);
/// Columns re, im, norm, singular; the norm column is "inf" for failed solves.
std::string resolvent_scan_to_csv(std::span<const ResolventSample> samples);

/// {"error": {"kind", "message", "exit_code", ...}} with the error's payload.
Json error_to_json(const Error& e);

/// Checks that a report produced by this library is well formed for the schema
/// named by its "report" tag. Throws ParseError otherwise.
void validate_report(const Json& j);

}  // namespace seqspec::io
