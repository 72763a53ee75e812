#pragma once

// JSON documents: frames (with optional local frames), vectors, matrices and
// analysis reports, plus generators for the standard example constructions.
//
// Frame document (schema "ffk/1"):
//   { "schema_version": "ffk/1", "field": "real" | "complex", "dimension": n,
//     "subspaces": [ { "weight": v, "vectors": [ row, ... ] }, ... ],
//     "local_frames": [ [ row, ... ], ... ] }            // optional
// A row has exactly `dimension` entries: numbers for real documents,
// [re, im] pairs for complex ones. Each row is one spanning vector.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ffk/fusion_frame.hpp"
#include "ffk/systems.hpp"

namespace ffk {

using json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "ffk/1";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Field { Real, Complex };

constexpr std::string_view to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

template <FieldScalar Scalar>
constexpr Field field_of() {
  return is_complex_v<Scalar> ? Field::Complex : Field::Real;
}

using Row = std::vector<Complex>;

struct SubspaceEntry {
  double weight = 1.0;
  std::vector<Row> vectors;

  friend bool operator==(const SubspaceEntry&, const SubspaceEntry&) = default;
};

struct FrameDocument {
  Field field = Field::Complex;
  std::size_t dimension = 0;
  std::vector<SubspaceEntry> subspaces;
  std::optional<std::vector<std::vector<Row>>> local_frames;

  friend bool operator==(const FrameDocument&, const FrameDocument&) = default;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what,
                                    std::optional<std::size_t> member = std::nullopt) {
  throw Error(ErrorCode::ParseError, where + ": " + what, member, where);
}

inline Field parse_field(const json& doc, const std::string& where) {
  if (!doc.contains("field")) return Field::Complex;
  const json& f = doc.at("field");
  if (f == "real") return Field::Real;
  if (f == "complex") return Field::Complex;
  parse_fail(where + ".field", "expected \"real\" or \"complex\"");
}

inline void check_schema(const json& doc) {
  if (!doc.is_object()) parse_fail("$", "document must be a JSON object");
  if (!doc.contains("schema_version")) parse_fail("$.schema_version", "missing");
  const json& v = doc.at("schema_version");
  if (!v.is_string()) parse_fail("$.schema_version", "must be a string");
  if (v.get<std::string>() != kSchemaVersion)
    throw Error(ErrorCode::SchemaVersionUnsupported,
                "schema_version " + v.get<std::string>() + " is not " + std::string(kSchemaVersion), std::nullopt,
                "$.schema_version");
}

inline Complex parse_entry(const json& e, Field field, const std::string& where) {
  if (field == Field::Real) {
    if (!e.is_number()) parse_fail(where, "real documents need plain numbers");
    return {e.get<double>(), 0.0};
  }
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    parse_fail(where, "complex documents need [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

inline Row parse_row(const json& r, Field field, std::size_t dimension, const std::string& where,
                     std::optional<std::size_t> member = std::nullopt) {
  if (!r.is_array()) parse_fail(where, "expected an array of coordinates", member);
  if (r.size() != dimension)
    parse_fail(where, "row has " + std::to_string(r.size()) + " entries, dimension is " + std::to_string(dimension),
               member);
  Row row;
  row.reserve(dimension);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Complex c = parse_entry(r[k], field, where + "[" + std::to_string(k) + "]");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) parse_fail(where, "non-finite entry", member);
    row.push_back(c);
  }
  return row;
}

inline std::vector<Row> parse_rows(const json& rows, Field field, std::size_t dimension, const std::string& where,
                                   std::optional<std::size_t> member = std::nullopt) {
  if (!rows.is_array() || rows.empty()) parse_fail(where, "expected a non-empty array of rows", member);
  std::vector<Row> out;
  for (std::size_t j = 0; j < rows.size(); ++j)
    out.push_back(parse_row(rows[j], field, dimension, where + "[" + std::to_string(j) + "]", member));
  return out;
}

inline json entry_json(Complex c, Field field) {
  if (field == Field::Real) return c.real();
  return json::array({c.real(), c.imag()});
}

inline json rows_json(const std::vector<Row>& rows, Field field) {
  json out = json::array();
  for (const Row& r : rows) {
    json jr = json::array();
    for (Complex c : r) jr.push_back(entry_json(c, field));
    out.push_back(std::move(jr));
  }
  return out;
}

template <FieldScalar Scalar>
Scalar narrow(Complex c) {
  if constexpr (is_complex_v<Scalar>)
    return c;
  else
    return c.real();
}

}  // namespace detail

inline json to_json(const FrameDocument& doc) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["field"] = to_string(doc.field);
  out["dimension"] = doc.dimension;
  json subspaces = json::array();
  for (const auto& s : doc.subspaces)
    subspaces.push_back({{"weight", s.weight}, {"vectors", detail::rows_json(s.vectors, doc.field)}});
  out["subspaces"] = std::move(subspaces);
  if (doc.local_frames) {
    json locals = json::array();
    for (const auto& l : *doc.local_frames) locals.push_back(detail::rows_json(l, doc.field));
    out["local_frames"] = std::move(locals);
  }
  return out;
}

inline FrameDocument parse_frame_document(const json& doc) {
  detail::check_schema(doc);
  FrameDocument out;
  out.field = detail::parse_field(doc, "$");
  if (!doc.contains("dimension") || !doc.at("dimension").is_number_unsigned() || doc.at("dimension").get<std::size_t>() < 1)
    detail::parse_fail("$.dimension", "expected a positive integer");
  out.dimension = doc.at("dimension").get<std::size_t>();
  if (!doc.contains("subspaces") || !doc.at("subspaces").is_array())
    detail::parse_fail("$.subspaces", "expected an array");
  const json& subs = doc.at("subspaces");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string where = "$.subspaces[" + std::to_string(i) + "]";
    const json& s = subs[i];
    if (!s.is_object()) detail::parse_fail(where, "expected an object", i);
    if (!s.contains("weight") || !s.at("weight").is_number()) detail::parse_fail(where + ".weight", "expected a number", i);
    if (!s.contains("vectors")) detail::parse_fail(where + ".vectors", "missing", i);
    SubspaceEntry e;
    e.weight = s.at("weight").get<double>();
    e.vectors = detail::parse_rows(s.at("vectors"), out.field, out.dimension, where + ".vectors", i);
    out.subspaces.push_back(std::move(e));
  }
  if (doc.contains("local_frames") && !doc.at("local_frames").is_null()) {
    const json& locals = doc.at("local_frames");
    if (!locals.is_array()) detail::parse_fail("$.local_frames", "expected an array");
    if (locals.size() != out.subspaces.size())
      detail::parse_fail("$.local_frames", std::to_string(locals.size()) + " local frames for " +
                                               std::to_string(out.subspaces.size()) + " subspaces");
    std::vector<std::vector<Row>> parsed;
    for (std::size_t i = 0; i < locals.size(); ++i)
      parsed.push_back(detail::parse_rows(locals[i], out.field, out.dimension,
                                          "$.local_frames[" + std::to_string(i) + "]", i));
    out.local_frames = std::move(parsed);
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what(), std::nullopt, path);
  }
}

inline void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

inline FrameDocument read_frame_document(const std::string& path) { return parse_frame_document(read_json_file(path)); }

/// Rows become columns: n x k.
template <FieldScalar Scalar>
Mat<Scalar> rows_to_matrix(const std::vector<Row>& rows, std::size_t dimension) {
  Mat<Scalar> m(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t k = 0; k < dimension; ++k)
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = detail::narrow<Scalar>(rows[j][k]);
  return m;
}

template <FieldScalar Scalar>
std::vector<Row> matrix_to_rows(const Mat<Scalar>& m) {
  std::vector<Row> rows(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index k = 0; k < m.rows(); ++k) rows[static_cast<std::size_t>(j)].push_back(Complex(m(k, j)));
  return rows;
}

template <FieldScalar Scalar>
struct LoadedFrame {
  FusionFrame<Scalar> frame;
  std::optional<FusionFrameSystem<Scalar>> system;
};

using AnyLoadedFrame = std::variant<LoadedFrame<double>, LoadedFrame<Complex>>;

/// Builds the frame (and the system, when local frames are present) in the
/// document's own field.
template <FieldScalar Scalar>
LoadedFrame<Scalar> build_from_document(const FrameDocument& doc, const Tolerance& tol = {}) {
  if (doc.field != field_of<Scalar>())
    throw Error(ErrorCode::FieldMismatch, "document field is " + std::string(to_string(doc.field)));
  const auto n = static_cast<Eigen::Index>(doc.dimension);
  std::vector<WeightedSpan<Scalar>> spans;
  for (const auto& s : doc.subspaces) spans.push_back({rows_to_matrix<Scalar>(s.vectors, doc.dimension), s.weight});
  LoadedFrame<Scalar> out{build_fusion_frame(spans, n, tol), std::nullopt};
  if (doc.local_frames) {
    std::vector<Mat<Scalar>> locals;
    for (const auto& l : *doc.local_frames) locals.push_back(rows_to_matrix<Scalar>(l, doc.dimension));
    out.system.emplace(out.frame, locals);
  }
  return out;
}

/// Builds in the requested field; real documents are promoted to complex,
/// complex documents are rejected for real sessions.
template <FieldScalar Scalar>
LoadedFrame<Scalar> load_as(FrameDocument doc, const Tolerance& tol = {}) {
  if (doc.field == Field::Complex && !is_complex_v<Scalar>)
    throw Error(ErrorCode::FieldMismatch, "complex document used with a real frame");
  doc.field = field_of<Scalar>();
  return build_from_document<Scalar>(doc, tol);
}

inline AnyLoadedFrame load_frame(const FrameDocument& doc, const Tolerance& tol = {}) {
  if (doc.field == Field::Real) return build_from_document<double>(doc, tol);
  return build_from_document<Complex>(doc, tol);
}

inline AnyLoadedFrame load_frame(const std::string& path, const Tolerance& tol = {}) {
  return load_frame(read_frame_document(path), tol);
}

/// Document for a frame: each member's orthonormal basis as its rows.
template <FieldScalar Scalar>
FrameDocument document_from_frame(const FusionFrame<Scalar>& frame) {
  FrameDocument doc;
  doc.field = field_of<Scalar>();
  doc.dimension = static_cast<std::size_t>(frame.ambient_dim());
  for (const auto& m : frame.members()) doc.subspaces.push_back({m.weight, matrix_to_rows(m.subspace.basis())});
  return doc;
}

/// As above, with the system's local frames when present.
template <FieldScalar Scalar>
FrameDocument document_from_loaded(const LoadedFrame<Scalar>& loaded) {
  FrameDocument doc = document_from_frame(loaded.frame);
  if (loaded.system) {
    doc.local_frames.emplace();
    for (const auto& l : loaded.system->local_frames()) doc.local_frames->push_back(matrix_to_rows(l.vectors()));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Vector and matrix documents
//   { "schema_version": "ffk/1", "field": ..., "vector": [ ... ] }
//   { "schema_version": "ffk/1", "field": ..., "matrix": [ row, ... ] }   (row-major)
// Real documents may be used with complex frames; the reverse is rejected.

namespace detail {

template <FieldScalar Scalar>
Field admissible_field(const json& doc) {
  const Field f = parse_field(doc, "$");
  if (f == Field::Complex && !is_complex_v<Scalar>)
    throw Error(ErrorCode::FieldMismatch, "complex document used with a real frame");
  return f;
}

}  // namespace detail

template <FieldScalar Scalar>
Vec<Scalar> parse_vector_document(const json& doc, std::size_t dimension) {
  detail::check_schema(doc);
  const Field f = detail::admissible_field<Scalar>(doc);
  if (!doc.contains("vector")) detail::parse_fail("$.vector", "missing");
  const Row row = detail::parse_row(doc.at("vector"), f, dimension, "$.vector");
  Vec<Scalar> v(static_cast<Eigen::Index>(dimension));
  for (std::size_t k = 0; k < dimension; ++k) v(static_cast<Eigen::Index>(k)) = detail::narrow<Scalar>(row[k]);
  return v;
}

template <FieldScalar Scalar>
Mat<Scalar> parse_matrix_document(const json& doc, std::size_t dimension) {
  detail::check_schema(doc);
  const Field f = detail::admissible_field<Scalar>(doc);
  if (!doc.contains("matrix")) detail::parse_fail("$.matrix", "missing");
  const json& rows = doc.at("matrix");
  if (!rows.is_array() || rows.size() != dimension)
    detail::parse_fail("$.matrix", "expected " + std::to_string(dimension) + " rows");
  Mat<Scalar> m(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
  for (std::size_t i = 0; i < dimension; ++i) {
    const Row r = detail::parse_row(rows[i], f, dimension, "$.matrix[" + std::to_string(i) + "]");
    for (std::size_t k = 0; k < dimension; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = detail::narrow<Scalar>(r[k]);
  }
  return m;
}

template <FieldScalar Scalar>
json vector_document(const Vec<Scalar>& v) {
  constexpr Field f = field_of<Scalar>();
  json row = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) row.push_back(detail::entry_json(Complex(v(k)), f));
  return {{"schema_version", kSchemaVersion}, {"field", to_string(f)}, {"vector", row}};
}

template <FieldScalar Scalar>
json matrix_document(const Mat<Scalar>& m) {
  constexpr Field f = field_of<Scalar>();
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(detail::entry_json(Complex(m(i, k)), f));
    rows.push_back(std::move(row));
  }
  return {{"schema_version", kSchemaVersion}, {"field", to_string(f)}, {"matrix", rows}};
}

// ---------------------------------------------------------------------------
// Example constructions

namespace detail {

inline Row unit_row(std::size_t n, std::size_t k) {
  Row r(n, Complex(0.0, 0.0));
  r[k] = Complex(1.0, 0.0);
  return r;
}

inline void add_member(FrameDocument& doc, double weight, std::vector<Row> rows) {
  doc.subspaces.push_back({weight, rows});
  doc.local_frames->push_back(std::move(rows));
}

}  // namespace detail

/// "7.1":   span{e_1} repeated n+1 times, then span{e_2}, ..., span{e_n}; unit weights.
/// "7.1-V": each span{e_i} twice; unit weights.
/// "7.2":   span{e_1}, ..., span{e_n}; unit weights.
/// "7.3":   C^5 with span{e1,e2,e3}, span{e2,e3,e4}, span{e4,e5}, span{e1,e5}
///          and weights sqrt(2/3), 2 sqrt(3)/3, sqrt(2/3), 2 sqrt(3)/3.
/// Local frames are the defining unit vectors.
inline FrameDocument emit_example(std::string_view name, std::optional<std::size_t> n_opt = std::nullopt,
                                  Field field = Field::Complex) {
  FrameDocument doc;
  doc.field = field;
  doc.local_frames.emplace();
  if (name == "7.3") {
    if (n_opt && *n_opt != 5)
      throw Error(ErrorCode::DimensionMismatch, "example 7.3 lives in dimension 5");
    const std::size_t n = 5;
    doc.dimension = n;
    const double light = std::sqrt(2.0 / 3.0);
    const double heavy = 2.0 * std::sqrt(3.0) / 3.0;
    using detail::unit_row;
    detail::add_member(doc, light, {unit_row(n, 0), unit_row(n, 1), unit_row(n, 2)});
    detail::add_member(doc, heavy, {unit_row(n, 1), unit_row(n, 2), unit_row(n, 3)});
    detail::add_member(doc, light, {unit_row(n, 3), unit_row(n, 4)});
    detail::add_member(doc, heavy, {unit_row(n, 0), unit_row(n, 4)});
    return doc;
  }
  const std::size_t n = n_opt.value_or(4);
  if (name != "7.1" && name != "7.1-V" && name != "7.2")
    throw Error(ErrorCode::UnknownExample, "unknown example '" + std::string(name) + "'");
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "example " + std::string(name) + " needs n >= 2");
  doc.dimension = n;
  if (name == "7.1") {
    for (std::size_t c = 0; c <= n; ++c) detail::add_member(doc, 1.0, {detail::unit_row(n, 0)});
    for (std::size_t k = 1; k < n; ++k) detail::add_member(doc, 1.0, {detail::unit_row(n, k)});
  } else if (name == "7.1-V") {
    for (std::size_t k = 0; k < n; ++k) {
      detail::add_member(doc, 1.0, {detail::unit_row(n, k)});
      detail::add_member(doc, 1.0, {detail::unit_row(n, k)});
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) detail::add_member(doc, 1.0, {detail::unit_row(n, k)});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Analysis reports

struct ErasureSummary {
  std::size_t certified = 0;
  std::string rule = "trivial";
  bool exhaustive = true;
  std::size_t budget = 0;

  friend bool operator==(const ErasureSummary&, const ErasureSummary&) = default;
};

struct SampledChecks {
  std::size_t samples = 0;
  double rayleigh_gap = 0.0;     // max |x^* S_1 x - sum ||P_i x||^2|
  bool bounds_sandwich = false;  // A <= sum v_i^2 ||P_i x||^2 <= B at every sample

  friend bool operator==(const SampledChecks&, const SampledChecks&) = default;
};

struct ReportDocument {
  std::string tool_version{kToolVersion};
  std::uint64_t seed = 0;
  Tolerance tolerances;
  Field field = Field::Complex;
  std::size_t dimension = 0;
  std::size_t members = 0;
  AnalysisReport analysis;
  ErasureSummary erasure;
  SampledChecks sampled;

  friend bool operator==(const ReportDocument& a, const ReportDocument& b) {
    return a.tool_version == b.tool_version && a.seed == b.seed && a.tolerances.rank_rel == b.tolerances.rank_rel &&
           a.tolerances.eig_rel == b.tolerances.eig_rel && a.tolerances.recon_abs == b.tolerances.recon_abs &&
           a.field == b.field && a.dimension == b.dimension && a.members == b.members && a.analysis == b.analysis &&
           a.erasure == b.erasure && a.sampled == b.sampled;
  }
};

inline json to_json(const ReportDocument& r) {
  const AnalysisReport& a = r.analysis;
  json out;
  out["schema_version"] = kSchemaVersion;
  out["tool_version"] = r.tool_version;
  out["seed"] = r.seed;
  out["tolerances"] = {{"rank_rel", r.tolerances.rank_rel},
                       {"eig_rel", r.tolerances.eig_rel},
                       {"recon_abs", r.tolerances.recon_abs}};
  out["field"] = to_string(r.field);
  out["dimension"] = r.dimension;
  out["members"] = r.members;
  out["bounds"] = a.bounds ? json{{"lower", a.bounds->lower}, {"upper", a.bounds->upper}} : json(nullptr);
  out["bessel_bound"] = a.bessel_bound;
  out["redundancy_range"] = {{"lower", a.redundancy.lower}, {"upper", a.redundancy.upper}};
  out["flags"] = {{"tight", a.tight},
                  {"parseval", a.parseval},
                  {"uniform_weights", a.uniform_weights},
                  {"orthonormal_fusion_basis", a.orthonormal_fusion_basis},
                  {"minimal", a.minimal},
                  {"uniform_redundancy", a.uniform_redundancy},
                  {"bessel_only", a.bessel_only},
                  {"orthonormal_basis_consistent", a.orthonormal_basis_consistent}};
  out["excess"] = a.excess;
  out["erasure"] = {{"certified", r.erasure.certified},
                    {"rule", r.erasure.rule},
                    {"exhaustive", r.erasure.exhaustive},
                    {"budget", r.erasure.budget}};
  out["sampled"] = {{"samples", r.sampled.samples},
                    {"rayleigh_gap", r.sampled.rayleigh_gap},
                    {"bounds_sandwich", r.sampled.bounds_sandwich}};
  return out;
}

inline ReportDocument parse_report_document(const json& doc) {
  detail::check_schema(doc);
  try {
    ReportDocument r;
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    const json& t = doc.at("tolerances");
    r.tolerances = {t.at("rank_rel").get<double>(), t.at("eig_rel").get<double>(), t.at("recon_abs").get<double>()};
    r.field = detail::parse_field(doc, "$");
    r.dimension = doc.at("dimension").get<std::size_t>();
    r.members = doc.at("members").get<std::size_t>();
    AnalysisReport& a = r.analysis;
    if (!doc.at("bounds").is_null())
      a.bounds = FrameBounds{doc.at("bounds").at("lower").get<double>(), doc.at("bounds").at("upper").get<double>()};
    a.bessel_bound = doc.at("bessel_bound").get<double>();
    a.redundancy = {doc.at("redundancy_range").at("lower").get<double>(),
                    doc.at("redundancy_range").at("upper").get<double>()};
    const json& f = doc.at("flags");
    a.tight = f.at("tight").get<bool>();
    a.parseval = f.at("parseval").get<bool>();
    a.uniform_weights = f.at("uniform_weights").get<bool>();
    a.orthonormal_fusion_basis = f.at("orthonormal_fusion_basis").get<bool>();
    a.minimal = f.at("minimal").get<bool>();
    a.uniform_redundancy = f.at("uniform_redundancy").get<bool>();
    a.bessel_only = f.at("bessel_only").get<bool>();
    a.orthonormal_basis_consistent = f.at("orthonormal_basis_consistent").get<bool>();
    a.excess = doc.at("excess").get<std::size_t>();
    const json& e = doc.at("erasure");
    r.erasure = {e.at("certified").get<std::size_t>(), e.at("rule").get<std::string>(), e.at("exhaustive").get<bool>(),
                 e.at("budget").get<std::size_t>()};
    const json& s = doc.at("sampled");
    r.sampled = {s.at("samples").get<std::size_t>(), s.at("rayleigh_gap").get<double>(),
                 s.at("bounds_sandwich").get<bool>()};
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report document: ") + e.what());
  }
}

struct ReportOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  std::optional<std::size_t> erasure_budget;  // default min(N - 1, 4)
  ErasureSearch search = ErasureSearch::Exhaustive;
};

template <FieldScalar Scalar>
ReportDocument make_report(const FusionFrame<Scalar>& frame, const ReportOptions& opts = {}) {
  ReportDocument r;
  r.seed = opts.seed;
  r.tolerances = frame.tolerance();
  r.field = field_of<Scalar>();
  r.dimension = static_cast<std::size_t>(frame.ambient_dim());
  r.members = frame.size();
  r.analysis = classify(frame);

  if (frame.is_frame() && frame.size() > 1) {
    const std::size_t budget = opts.erasure_budget.value_or(std::min<std::size_t>(frame.size() - 1, 4));
    const RobustnessCertificate cert = max_robust_erasures(frame, budget, opts.search);
    r.erasure = {cert.certified, cert.rule, cert.exhaustive, cert.budget};
  }

  Rng rng(opts.seed);
  r.sampled.samples = opts.samples;
  r.sampled.bounds_sandwich = frame.is_frame();
  const double rel = frame.tolerance().eig_rel;
  const EigenRange spec = frame.spectrum();
  for (std::size_t s = 0; s < opts.samples; ++s) {
    const Vec<Scalar> x = random_unit_vector<Scalar>(frame.ambient_dim(), rng);
    r.sampled.rayleigh_gap = std::max(r.sampled.rayleigh_gap,
                                      std::abs(redundancy_at(frame, x) - redundancy_at_direct(frame, x)));
    double energy = 0.0;
    for (const auto& m : frame.members()) energy += m.weight * m.weight * m.subspace.projected_norm2(x);
    if (energy < spec.min - rel * spec.max || energy > spec.max * (1.0 + rel)) r.sampled.bounds_sandwich = false;
  }
  return r;
}

}  // namespace ffk
